#include "cobbie/docs/chunk.hpp"

#include <cctype>
#include <sstream>

namespace cobbie::docs {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream ss(text);
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

bool is_comment_line(const std::string& s) {
    std::size_t i = s.find_first_not_of(" \t");
    if (i == std::string::npos) return false;
    return s[i] == '#' || s.compare(i, 2, "//") == 0 || s.compare(i, 2, "/*") == 0 ||
           s[i] == '*';
}

// Top-level code-unit boundary: an unindented line introducing a function,
// class, or method-like definition. Heuristic, not a language parser.
bool is_unit_boundary(const std::string& s) {
    if (s.empty() || std::isspace(static_cast<unsigned char>(s[0]))) return false;
    for (const char* kw : {"def ", "class ", "fn ", "function ", "struct ", "async def "})
        if (s.rfind(kw, 0) == 0) return true;
    // name(...)-style signature
    std::size_t i = 0;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' ||
                            s[i] == ':' || s[i] == '<' || s[i] == '>' || s[i] == ' ' ||
                            s[i] == '&' || s[i] == '*'))
        ++i;
    return i > 0 && i < s.size() && s[i] == '(' && !is_comment_line(s);
}

std::string slug(const std::string& title, std::size_t max_len = 40) {
    std::string out;
    for (char c : title) {
        if (out.size() >= max_len) break;
        if (std::isalnum(static_cast<unsigned char>(c)))
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        else if (!out.empty() && out.back() != '-')
            out += '-';
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out;
}

std::string join(const std::vector<std::string>& lines, std::size_t from, std::size_t to) {
    std::string out;
    for (std::size_t i = from; i < to; ++i) {
        out += lines[i];
        out += '\n';
    }
    return out;
}

void emit(std::vector<DocChunk>& out, const CorpusFile& f, ChunkKind kind,
          const std::string& title, std::string body) {
    DocChunk c;
    c.kind = kind;
    c.title = title;
    c.body = std::move(body);
    c.chunk_id = f.path + "#" + std::to_string(out.size()) + "-" + slug(title);
    out.push_back(std::move(c));
}

void chunk_source(const CorpusFile& f, std::vector<DocChunk>& out) {
    std::vector<std::string> lines = split_lines(f.text);
    std::vector<std::size_t> bounds;
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (is_unit_boundary(lines[i])) bounds.push_back(i);

    std::vector<DocChunk> local;
    if (bounds.empty()) {
        emit(local, f, ChunkKind::CodeUnit, f.path, f.text);
        local.back().diagnostic = "no top-level units found; whole file kept as one chunk";
    } else {
        for (std::size_t b = 0; b < bounds.size(); ++b) {
            // attach the comment block immediately above the signature
            std::size_t start = bounds[b];
            while (start > 0 && is_comment_line(lines[start - 1]) &&
                   (b == 0 || start - 1 > bounds[b - 1]))
                --start;
            if (b == 0) start = 0;  // file preamble joins the first unit
            std::size_t end = b + 1 < bounds.size() ? bounds[b + 1] : lines.size();
            // the next unit's doc-comment belongs to it, not to this chunk
            if (b + 1 < bounds.size()) {
                while (end > bounds[b] + 1 && is_comment_line(lines[end - 1])) --end;
            }
            emit(local, f, ChunkKind::CodeUnit, lines[bounds[b]], join(lines, start, end));
        }
    }
    // chunk ids are ordinal within the whole corpus run
    for (auto& c : local) {
        c.chunk_id = f.path + "#" + std::to_string(&c - local.data()) + "-" + slug(c.title);
        out.push_back(std::move(c));
    }
}

void chunk_document(const CorpusFile& f, std::vector<DocChunk>& out) {
    std::vector<std::string> lines = split_lines(f.text);
    std::vector<std::size_t> heads;
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (!lines[i].empty() && lines[i][0] == '#') heads.push_back(i);

    std::vector<DocChunk> local;
    if (heads.empty()) {
        emit(local, f, ChunkKind::DocSection, f.path, f.text);
        local.back().diagnostic = "no section headings found; whole file kept as one chunk";
    } else {
        if (heads[0] > 0) {
            std::string preamble = join(lines, 0, heads[0]);
            if (preamble.find_first_not_of(" \t\r\n") != std::string::npos)
                emit(local, f, ChunkKind::DocSection, "(preamble)", preamble);
        }
        for (std::size_t h = 0; h < heads.size(); ++h) {
            std::size_t end = h + 1 < heads.size() ? heads[h + 1] : lines.size();
            emit(local, f, ChunkKind::DocSection, lines[heads[h]],
                 join(lines, heads[h], end));
        }
    }
    for (auto& c : local) {
        c.chunk_id = f.path + "#" + std::to_string(&c - local.data()) + "-" + slug(c.title);
        out.push_back(std::move(c));
    }
}

}  // namespace

std::vector<DocChunk> chunk_corpus(const std::vector<CorpusFile>& files) {
    std::vector<DocChunk> out;
    for (const auto& f : files) {
        if (f.kind == "source")
            chunk_source(f, out);
        else
            chunk_document(f, out);
    }
    return out;
}

}  // namespace cobbie::docs
