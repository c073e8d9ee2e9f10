#include "cobbie/agent/provider.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace cobbie::agent {

using nlohmann::json;

ReplayProvider ReplayProvider::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f.good()) throw ProviderError("cannot open replay script: " + path);
    std::vector<std::tuple<std::string, int, std::string>> records;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("task_id") || !j.contains("turn") ||
            !j.contains("response"))
            throw ProviderError("malformed replay record at line " + std::to_string(lineno));
        records.emplace_back(j["task_id"].get<std::string>(), j["turn"].get<int>(),
                             j["response"].get<std::string>());
    }
    return from_records(std::move(records));
}

ReplayProvider ReplayProvider::from_records(
    std::vector<std::tuple<std::string, int, std::string>> records) {
    ReplayProvider p;
    for (auto& [task, turn, response] : records) p.script_[{task, turn}] = std::move(response);
    return p;
}

std::string ReplayProvider::complete(const ProviderRequest& req) {
    ++*calls_;
    for (const auto& key : {std::pair<std::string, int>{req.session_id, req.turn},
                            {req.session_id, -1},
                            {"*", req.turn},
                            {"*", -1}}) {
        auto it = script_.find(key);
        if (it != script_.end()) return it->second;
    }
    throw ProviderError("replay script has no response for (" + req.session_id + ", turn " +
                        std::to_string(req.turn) + ")");
}

HttpChatProvider::HttpChatProvider(std::string base_url, std::string model_name,
                                   double temperature)
    : base_url_(std::move(base_url)), model_name_(std::move(model_name)),
      temperature_(temperature) {}

std::string HttpChatProvider::complete(const ProviderRequest& req) {
    json body;
    body["model"] = model_name_;
    body["temperature"] = temperature_;
    json messages = json::array();
    messages.push_back({{"role", "system"}, {"content", req.system_prompt}});
    for (const auto& m : req.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
    body["messages"] = std::move(messages);

    httplib::Headers headers;
    if (const char* key = std::getenv("COBBIE_API_KEY"))
        headers.emplace("Authorization", std::string("Bearer ") + key);

    std::string last_error;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(250 << (attempt - 1)));
        httplib::Client client(base_url_);
        client.set_read_timeout(120, 0);
        auto res = client.Post("/v1/chat/completions", headers, body.dump(),
                               "application/json");
        if (!res) {
            last_error = "transport failure";
            continue;
        }
        if (res->status >= 500 || res->status == 429) {
            last_error = "status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw ProviderError("provider rejected request: status " +
                                std::to_string(res->status));
        json j = json::parse(res->body, nullptr, false);
        if (j.is_discarded() || !j.contains("choices") || j["choices"].empty())
            throw ProviderError("provider returned unparseable body");
        return j["choices"][0]["message"]["content"].get<std::string>();
    }
    throw ProviderError("provider unreachable after " + std::to_string(kMaxRetries) +
                        " attempts: " + last_error);
}

}  // namespace cobbie::agent
