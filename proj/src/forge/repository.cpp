#include "cobbie/forge/repository.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace cobbie::forge {

using nlohmann::json;

namespace {

// whole-word call site: name immediately followed by '('
bool code_calls(const std::string& code, const std::string& name) {
    std::size_t pos = 0;
    while ((pos = code.find(name, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || (!std::isalnum(static_cast<unsigned char>(code[pos - 1])) &&
                                    code[pos - 1] != '_');
        std::size_t after = pos + name.size();
        std::size_t p = after;
        while (p < code.size() && (code[p] == ' ' || code[p] == '\t')) ++p;
        if (left_ok && p < code.size() && code[p] == '(') return true;
        pos = after;
    }
    return false;
}

}  // namespace

std::vector<const ToolRecord*> ToolRepository::active() const {
    std::vector<const ToolRecord*> out;
    for (const auto& t : tools_)
        if (t.status == ToolStatus::Active) out.push_back(&t);
    return out;
}

ToolRecord* ToolRepository::find_active(const std::string& name) {
    for (auto& t : tools_)
        if (t.status == ToolStatus::Active && t.name == name) return &t;
    return nullptr;
}

void ToolRepository::insert_or_replace(const ToolRecord& tool) {
    if (ToolRecord* existing = find_active(tool.name)) {
        existing->source = tool.source;
        existing->signature = tool.signature;
        existing->description = tool.description;
        return;
    }
    tools_.push_back(tool);
}

std::vector<std::string> ToolRepository::prune(long current_question, std::string* diagnostic) {
    std::vector<std::string> pruned;
    for (;;) {
        std::vector<ToolRecord*> act;
        for (auto& t : tools_)
            if (t.status == ToolStatus::Active) act.push_back(&t);
        if (static_cast<int>(act.size()) <= capacity_) break;

        ToolRecord* victim = nullptr;
        for (ToolRecord* t : act) {
            if (current_question - t->created_at_question < grace_) continue;
            if (!victim) {
                victim = t;
                continue;
            }
            double st = deletion_score(*t), sv = deletion_score(*victim);
            if (st > sv ||
                (st == sv && (t->created_at_question < victim->created_at_question ||
                              (t->created_at_question == victim->created_at_question &&
                               t->name < victim->name))))
                victim = t;
        }
        if (!victim) {
            if (diagnostic)
                *diagnostic = "all over-capacity tools are within the grace period; "
                              "capacity temporarily exceeded";
            break;
        }
        victim->status = ToolStatus::Pruned;
        pruned.push_back(victim->name);
    }
    return pruned;
}

void ToolRepository::record_usage(const cobbie::agent::SessionRecord& session, bool correct,
                                  const std::vector<std::string>* installed) {
    for (auto& t : tools_) {
        if (t.status != ToolStatus::Active) continue;
        if (installed &&
            std::find(installed->begin(), installed->end(), t.name) == installed->end())
            continue;
        t.available_count += 1;
        bool called = false;
        for (const auto& turn : session.turns)
            if (turn.code && code_calls(*turn.code, t.name)) called = true;
        if (called) {
            t.calls += 1;
            if (correct) t.success_contributions += 1;
        }
    }
}

void ToolRepository::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f.good()) throw std::runtime_error("cannot write tool repository: " + path);
    for (const auto& t : tools_) {
        json j{{"name", t.name},
               {"signature", t.signature},
               {"description", t.description},
               {"source", t.source},
               {"created_at_question", t.created_at_question},
               {"calls", t.calls},
               {"available_count", t.available_count},
               {"success_contributions", t.success_contributions},
               {"status", t.status == ToolStatus::Active ? "active" : "pruned"},
               {"manual", t.manual}};
        f << j.dump() << "\n";
    }
}

ToolRepository ToolRepository::load(const std::string& path, int capacity, int grace_period) {
    std::ifstream f(path, std::ios::binary);
    if (!f.good()) throw std::runtime_error("cannot open tool repository: " + path);
    ToolRepository repo(capacity, grace_period);
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw std::runtime_error("malformed tool record at line " + std::to_string(lineno));
        ToolRecord t;
        t.name = j.at("name").get<std::string>();
        t.signature = j.value("signature", t.name + "()");
        t.description = j.value("description", "");
        t.source = j.at("source").get<std::string>();
        t.created_at_question = j.value("created_at_question", 0L);
        t.calls = j.value("calls", 0L);
        t.available_count = j.value("available_count", 0L);
        t.success_contributions = j.value("success_contributions", 0L);
        t.status = j.value("status", "active") == "active" ? ToolStatus::Active
                                                           : ToolStatus::Pruned;
        t.manual = j.value("manual", false);
        repo.tools_.push_back(std::move(t));
    }
    return repo;
}

}  // namespace cobbie::forge
