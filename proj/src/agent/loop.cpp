#include "cobbie/agent/loop.hpp"

#include <sstream>

#include "cobbie/bql/env.hpp"

namespace cobbie::agent {

namespace {

constexpr const char* kProtocolFailure = "protocol failure";
constexpr const char* kHistoryStub = "[output truncated]";

std::string format_exec_output(const cobbie::bql::ExecResult& r) {
    std::string out = "Output:\n";
    out += r.printed;
    if (r.error) {
        if (!out.empty() && out.back() != '\n') out += '\n';
        out += "Error: " + *r.error;
    }
    return out;
}

// One in-flight session; owns the message transcript and the turn counter.
class Session {
public:
    Session(SessionRecord& rec, LlmProvider& provider, std::size_t char_budget)
        : rec_(rec), provider_(provider), char_budget_(char_budget) {}

    void push_user(std::string content, bool is_exec_output = false) {
        messages_.push_back({"user", std::move(content)});
        output_msg_.push_back(is_exec_output);
    }
    void push_assistant(std::string content) {
        messages_.push_back({"assistant", std::move(content)});
        output_msg_.push_back(false);
    }

    // Provider call; the exact message list sent is stored on the turn.
    std::string call() {
        trim_to_budget();
        ProviderRequest req;
        req.session_id = rec_.session_id;
        req.turn = turn_++;
        req.system_prompt = rec_.system_prompt;
        req.messages = messages_;
        std::string raw = provider_.complete(req);
        SessionTurn t;
        t.sent_messages = messages_;
        t.raw_response = raw;
        rec_.turns.push_back(std::move(t));
        return raw;
    }

    // Parses with up to kMalformedRetries re-requests. Returns nullopt after
    // marking the session Abstained("protocol failure").
    std::optional<AgentResponse> call_parsed() {
        for (int attempt = 0; attempt <= kMalformedRetries; ++attempt) {
            std::string raw = call();
            AgentResponse resp = parse_agent_response(raw);
            if (!std::holds_alternative<ProtocolError>(resp)) return resp;
            push_assistant(raw);
            push_user("Protocol error: " + std::get<ProtocolError>(resp).message +
                      " Respond with a ```action fence or a FINAL: line.");
        }
        rec_.outcome = OutcomeKind::Abstained;
        rec_.outcome_text = kProtocolFailure;
        return std::nullopt;
    }

    void record_execution(const std::string& raw, const std::string& code,
                          const cobbie::bql::ExecResult& result) {
        rec_.turns.back().code = code;
        rec_.turns.back().exec = result;
        push_assistant(raw);
        push_user(format_exec_output(result), /*is_exec_output=*/true);
    }

    void finish(const FinalAnswer& fa) {
        rec_.outcome_text = fa.answer;
        rec_.outcome = fa.answer == kAbstentionString ? OutcomeKind::Abstained
                                                      : OutcomeKind::Answered;
    }

private:
    // Oldest execution outputs collapse to stubs first; newest are preserved.
    void trim_to_budget() {
        auto total = [&] {
            std::size_t n = rec_.system_prompt.size();
            for (const auto& m : messages_) n += m.content.size();
            return n;
        };
        for (std::size_t i = 0; i < messages_.size() && total() > char_budget_; ++i) {
            if (output_msg_[i] && messages_[i].content != kHistoryStub)
                messages_[i].content = kHistoryStub;
        }
    }

    SessionRecord& rec_;
    LlmProvider& provider_;
    std::size_t char_budget_;
    std::vector<ChatMessage> messages_;
    std::vector<bool> output_msg_;
    int turn_ = 0;
};

}  // namespace

SessionRecord run_adaptive(const std::string& question, LlmProvider& provider,
                           cobbie::bql::ExecEnvironment& env, const AdaptiveConfig& cfg) {
    SessionRecord rec;
    rec.session_id = cfg.session_id;
    rec.question = question;
    rec.model_path = cfg.model_path;
    rec.system_prompt = build_system_prompt(cfg.tools, cobbie::bql::grammar_text(), cfg.prompt);

    if (cfg.docs) env.set_docs_callback(cfg.docs);

    Session session(rec, provider, cfg.context_char_budget);
    session.push_user("Question: " + question);
    try {
        while (rec.history_size() < cfg.max_iterations) {
            auto resp = session.call_parsed();
            if (!resp) return rec;
            if (auto* fa = std::get_if<FinalAnswer>(&*resp)) {
                session.finish(*fa);
                return rec;
            }
            const auto& ca = std::get<CodeAction>(*resp);
            cobbie::bql::ExecResult result = env.execute(ca.code);
            ++rec.execute_calls;
            session.record_execution(rec.turns.back().raw_response, ca.code, result);
        }
        rec.outcome = OutcomeKind::Abstained;
        rec.outcome_text = kAbstentionString;
    } catch (const ProviderError& e) {
        rec.system_error = true;
        rec.diagnostic = e.what();
    }
    return rec;
}

SessionRecord run_static(const std::string& question, LlmProvider& provider,
                         cobbie::bql::ExecEnvironment& env, const StaticConfig& cfg) {
    SessionRecord rec;
    rec.session_id = cfg.session_id;
    rec.question = question;
    rec.model_path = cfg.model_path;
    rec.system_prompt = build_system_prompt(cfg.tools, cobbie::bql::grammar_text(), cfg.prompt);

    Session session(rec, provider, kDefaultContextCharBudget);
    try {
        std::string doc_context;
        if (cfg.fetch_chunks) {
            session.push_user(
                "Question: " + question +
                "\n\nList up to " + std::to_string(cfg.max_planner_queries) +
                " documentation search queries, one per line. Output only the queries.");
            std::string raw = session.call();
            std::istringstream lines(raw);
            std::string line;
            std::vector<std::string> queries;
            while (std::getline(lines, line) &&
                   queries.size() < static_cast<std::size_t>(cfg.max_planner_queries)) {
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    queries.push_back(line);
            }
            std::vector<std::string> seen_ids;
            std::vector<std::string> blocks;
            for (const auto& q : queries) {
                for (auto& [chunk_id, block] : cfg.fetch_chunks(q)) {
                    if (blocks.size() >= static_cast<std::size_t>(cfg.max_prefetch_chunks))
                        break;
                    bool dup = false;
                    for (const auto& id : seen_ids)
                        if (id == chunk_id) {
                            dup = true;
                            break;
                        }
                    if (dup) continue;
                    seen_ids.push_back(chunk_id);
                    blocks.push_back(block);
                }
            }
            for (const auto& b : blocks) {
                doc_context += b;
                if (doc_context.back() != '\n') doc_context += '\n';
            }
        }

        std::string ask = "Question: " + question;
        if (!doc_context.empty()) ask += "\n\n## Documentation\n" + doc_context;
        ask += "\nWrite one BQL code block that gathers everything needed to answer. "
               "You get exactly one execution and cannot issue follow-up code.";
        session.push_user(std::move(ask));

        auto resp = session.call_parsed();
        if (!resp) return rec;
        if (auto* fa = std::get_if<FinalAnswer>(&*resp)) {
            session.finish(*fa);
            return rec;
        }
        const auto& ca = std::get<CodeAction>(*resp);
        cobbie::bql::ExecResult result = env.execute(ca.code);
        ++rec.execute_calls;
        session.record_execution(rec.turns.back().raw_response, ca.code, result);

        // Final turn: only FINAL: is acceptable, follow-up code is a protocol error.
        for (int attempt = 0; attempt <= kMalformedRetries; ++attempt) {
            auto final_resp = session.call_parsed();
            if (!final_resp) return rec;
            if (auto* fa = std::get_if<FinalAnswer>(&*final_resp)) {
                session.finish(*fa);
                return rec;
            }
            session.push_assistant(rec.turns.back().raw_response);
            session.push_user("You cannot issue follow-up code. Respond with FINAL:.");
        }
        rec.outcome = OutcomeKind::Abstained;
        rec.outcome_text = kProtocolFailure;
    } catch (const ProviderError& e) {
        rec.system_error = true;
        rec.diagnostic = e.what();
    }
    return rec;
}

}  // namespace cobbie::agent
