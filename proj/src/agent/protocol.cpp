#include "cobbie/agent/protocol.hpp"

namespace cobbie::agent {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Position of a line starting with "FINAL:" (leading whitespace allowed).
std::size_t find_final_marker(const std::string& raw) {
    std::size_t pos = 0;
    while (pos <= raw.size()) {
        std::size_t line_start = pos;
        std::size_t eol = raw.find('\n', pos);
        std::size_t line_end = eol == std::string::npos ? raw.size() : eol;
        std::size_t content = line_start;
        while (content < line_end && (raw[content] == ' ' || raw[content] == '\t')) ++content;
        if (raw.compare(content, 6, "FINAL:") == 0) return content;
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }
    return std::string::npos;
}

}  // namespace

AgentResponse parse_agent_response(const std::string& raw) {
    std::size_t final_pos = find_final_marker(raw);
    if (final_pos != std::string::npos) {
        FinalAnswer fa;
        fa.reasoning = trim(raw.substr(0, final_pos));
        fa.answer = trim(raw.substr(final_pos + 6));
        return fa;
    }

    const std::string open = "```action";
    std::size_t fence = raw.find(open);
    if (fence != std::string::npos) {
        std::size_t body = raw.find('\n', fence);
        if (body != std::string::npos) {
            ++body;
            std::size_t close = raw.find("```", body);
            if (close != std::string::npos) {
                CodeAction ca;
                ca.reasoning = trim(raw.substr(0, fence));
                ca.code = raw.substr(body, close - body);
                return ca;
            }
        }
        return ProtocolError{"unterminated action fence"};
    }
    return ProtocolError{"no action fence or FINAL: marker found"};
}

}  // namespace cobbie::agent
