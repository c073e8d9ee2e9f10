#include "cobbie/ifc/parser.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cobbie::ifc {

namespace {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return pos < text.size() ? text[pos] : '\0'; }
    char peek2() const { return pos + 1 < text.size() ? text[pos + 1] : '\0'; }

    char advance() {
        char c = text[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }
};

[[noreturn]] void fail(const Cursor& c, std::string msg) {
    throw ParseError{c.line, c.col, std::move(msg)};
}

void skip_ws(Cursor& c) {
    for (;;) {
        while (!c.eof() && std::isspace(static_cast<unsigned char>(c.peek()))) c.advance();
        if (c.peek() == '/' && c.peek2() == '*') {
            c.advance();
            c.advance();
            while (!c.eof() && !(c.peek() == '*' && c.peek2() == '/')) c.advance();
            if (c.eof()) fail(c, "unterminated comment");
            c.advance();
            c.advance();
            continue;
        }
        break;
    }
}

void expect(Cursor& c, char ch) {
    skip_ws(c);
    if (c.peek() != ch) fail(c, std::string("expected '") + ch + "'");
    c.advance();
}

bool is_ident_char(char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
}

std::string read_keyword(Cursor& c) {
    skip_ws(c);
    std::string out;
    while (!c.eof() && is_ident_char(c.peek())) out.push_back(c.advance());
    if (out.empty()) fail(c, "expected keyword");
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    return out;
}

// Raw string payload between quotes, '' kept verbatim for the decode pass.
std::string read_string_raw(Cursor& c) {
    if (c.peek() != '\'') fail(c, "expected string");
    c.advance();
    std::string out;
    for (;;) {
        if (c.eof()) fail(c, "unterminated string");
        char ch = c.advance();
        if (ch == '\'') {
            if (c.peek() == '\'') {
                out += "''";
                c.advance();
                continue;
            }
            return out;
        }
        out.push_back(ch);
    }
}

std::int64_t read_instance_id(Cursor& c) {
    if (c.peek() != '#') fail(c, "expected '#'");
    c.advance();
    if (!std::isdigit(static_cast<unsigned char>(c.peek()))) fail(c, "expected instance number");
    std::int64_t id = 0;
    while (std::isdigit(static_cast<unsigned char>(c.peek()))) id = id * 10 + (c.advance() - '0');
    return id;
}

AttributeValue parse_value(Cursor& c);

AttributeList parse_param_list(Cursor& c) {
    expect(c, '(');
    AttributeList out;
    skip_ws(c);
    if (c.peek() == ')') {
        c.advance();
        return out;
    }
    for (;;) {
        out.push_back(parse_value(c));
        skip_ws(c);
        char ch = c.peek();
        if (ch == ',') {
            c.advance();
            continue;
        }
        if (ch == ')') {
            c.advance();
            return out;
        }
        fail(c, "expected ',' or ')' in parameter list");
    }
}

AttributeValue parse_number(Cursor& c) {
    std::string num;
    if (c.peek() == '+' || c.peek() == '-') num.push_back(c.advance());
    bool real = false;
    while (!c.eof()) {
        char ch = c.peek();
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            num.push_back(c.advance());
        } else if (ch == '.' || ch == 'E' || ch == 'e') {
            real = true;
            num.push_back(c.advance());
            if ((ch == 'E' || ch == 'e') && (c.peek() == '+' || c.peek() == '-'))
                num.push_back(c.advance());
        } else {
            break;
        }
    }
    if (num.empty() || num == "+" || num == "-") fail(c, "malformed number");
    if (real) return AttributeValue{std::strtod(num.c_str(), nullptr)};
    return AttributeValue{static_cast<std::int64_t>(std::strtoll(num.c_str(), nullptr, 10))};
}

AttributeValue parse_value(Cursor& c) {
    skip_ws(c);
    char ch = c.peek();
    switch (ch) {
        case '$':
            c.advance();
            return AttributeValue{NullValue{}};
        case '*':
            c.advance();
            return AttributeValue{DerivedPlaceholder{}};
        case '#':
            return AttributeValue{Reference{read_instance_id(c)}};
        case '\'':
            return AttributeValue{decode_step_string(read_string_raw(c))};
        case '(':
            return AttributeValue{parse_param_list(c)};
        case '.': {
            c.advance();
            std::string tok;
            while (!c.eof() && c.peek() != '.') tok.push_back(c.advance());
            if (c.eof()) fail(c, "unterminated enumeration");
            c.advance();
            if (tok == "T") return AttributeValue{true};
            if (tok == "F") return AttributeValue{false};
            if (tok == "U") return AttributeValue{LogicalUnknown{}};
            return AttributeValue{EnumToken{std::move(tok)}};
        }
        case '"': {
            // binary literal; kept as raw hex text
            c.advance();
            std::string hex;
            while (!c.eof() && c.peek() != '"') hex.push_back(c.advance());
            if (c.eof()) fail(c, "unterminated binary literal");
            c.advance();
            return AttributeValue{std::move(hex)};
        }
        default:
            break;
    }
    if (ch == '+' || ch == '-' || std::isdigit(static_cast<unsigned char>(ch)))
        return parse_number(c);
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        // inline typed value, e.g. IFCLABEL('x')
        std::string tag = read_keyword(c);
        AttributeList inner = parse_param_list(c);
        TypedScalar ts;
        ts.type_tag = std::move(tag);
        ts.value = std::make_shared<AttributeValue>(
            inner.empty() ? AttributeValue{NullValue{}} : std::move(inner.front()));
        return AttributeValue{std::move(ts)};
    }
    fail(c, std::string("unexpected character '") + ch + "' in parameter");
}

// Header entries are parsed with the same value grammar; only FILE_SCHEMA matters.
void parse_header(Cursor& c, EntityGraph& g) {
    for (;;) {
        skip_ws(c);
        if (c.eof()) fail(c, "unterminated HEADER section");
        std::string kw = read_keyword(c);
        if (kw == "ENDSEC") {
            expect(c, ';');
            return;
        }
        AttributeList params = parse_param_list(c);
        expect(c, ';');
        if (kw == "FILE_SCHEMA" && !params.empty() && params[0].is_list() &&
            !params[0].list().empty() && params[0].list()[0].is_text()) {
            g.schema_id = params[0].list()[0].text();
        }
    }
}

void collect_references(const AttributeValue& v, int role, InstanceId referrer, EntityGraph& g,
                        std::vector<DanglingReference>& dangling) {
    if (v.is_ref()) {
        InstanceId target = v.ref_id();
        if (g.has(target)) {
            g.inverse_index[target].push_back({referrer, role});
        } else {
            dangling.push_back({referrer, target, role});
        }
        return;
    }
    if (v.is_list()) {
        for (const auto& e : v.list()) collect_references(e, role, referrer, g, dangling);
        return;
    }
    if (auto* ts = std::get_if<TypedScalar>(&v.data); ts && ts->value) {
        collect_references(*ts->value, role, referrer, g, dangling);
    }
}

EntityGraph parse_impl(std::string_view text) {
    Cursor c{text};
    EntityGraph g;

    skip_ws(c);
    std::string magic = read_keyword(c);
    if (magic != "ISO-10303-21") fail(c, "not an ISO 10303-21 file");
    expect(c, ';');

    bool saw_data = false;
    for (;;) {
        skip_ws(c);
        if (c.eof()) fail(c, "missing END-ISO-10303-21");
        if (c.peek() == '#') {
            if (!saw_data) fail(c, "instance outside DATA section");
            InstanceId id = read_instance_id(c);
            expect(c, '=');
            skip_ws(c);
            EntityInstance inst;
            inst.id = id;
            inst.ifc_type = read_keyword(c);
            inst.attributes = parse_param_list(c);
            expect(c, ';');
            if (id <= 0) fail(c, "instance ids must be positive");
            if (!g.entities.emplace(id, std::move(inst)).second)
                fail(c, "duplicate instance #" + std::to_string(id));
            continue;
        }
        std::string kw = read_keyword(c);
        if (kw == "HEADER") {
            expect(c, ';');
            parse_header(c, g);
        } else if (kw == "DATA") {
            expect(c, ';');
            saw_data = true;
        } else if (kw == "ENDSEC") {
            expect(c, ';');
        } else if (kw == "END-ISO-10303-21") {
            expect(c, ';');
            break;
        } else {
            fail(c, "unexpected keyword " + kw);
        }
    }

    // Deferred resolution: forward references are legal in SPF.
    for (const auto& [id, inst] : g.entities) {
        g.type_index[inst.ifc_type].push_back(id);
        for (int role = 0; role < static_cast<int>(inst.attributes.size()); ++role)
            collect_references(inst.attributes[role], role, id, g, g.dangling);
    }
    for (auto& [type, ids] : g.type_index) std::sort(ids.begin(), ids.end());
    for (auto& [id, entries] : g.inverse_index)
        std::sort(entries.begin(), entries.end(), [](const InverseEntry& a, const InverseEntry& b) {
            return std::tie(a.referrer, a.role) < std::tie(b.referrer, b.role);
        });
    return g;
}

void append_utf8(std::string& out, unsigned int cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

int hex_val(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

bool read_hex(std::string_view s, std::size_t pos, int digits, unsigned int& out) {
    out = 0;
    for (int i = 0; i < digits; ++i) {
        if (pos + i >= s.size()) return false;
        int v = hex_val(s[pos + i]);
        if (v < 0) return false;
        out = out * 16 + static_cast<unsigned int>(v);
    }
    return true;
}

}  // namespace

std::string decode_step_string(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
        char c = raw[i];
        if (c == '\'' && i + 1 < raw.size() && raw[i + 1] == '\'') {
            out.push_back('\'');
            i += 2;
            continue;
        }
        if (c != '\\') {
            out.push_back(c);
            ++i;
            continue;
        }
        if (raw.compare(i, 2, "\\\\") == 0) {
            out.push_back('\\');
            i += 2;
        } else if (raw.compare(i, 4, "\\X2\\") == 0 || raw.compare(i, 4, "\\X4\\") == 0) {
            int width = raw[i + 2] == '2' ? 4 : 8;
            i += 4;
            while (raw.compare(i, 4, "\\X0\\") != 0) {
                unsigned int cp;
                if (!read_hex(raw, i, width, cp)) {
                    out.push_back('?');
                    return out;  // malformed escape; keep what we have
                }
                append_utf8(out, cp);
                i += static_cast<std::size_t>(width);
            }
            i += 4;
        } else if (raw.compare(i, 3, "\\X\\") == 0) {
            unsigned int cp;
            if (read_hex(raw, i + 3, 2, cp)) {
                append_utf8(out, cp);
                i += 5;
            } else {
                out.push_back(raw[i]);
                ++i;
            }
        } else if (raw.compare(i, 3, "\\S\\") == 0 && i + 3 < raw.size()) {
            append_utf8(out, static_cast<unsigned char>(raw[i + 3]) + 0x80u);
            i += 4;
        } else if (raw.compare(i, 3, "\\N\\") == 0) {
            out.push_back('\n');
            i += 3;
        } else {
            out.push_back(c);
            ++i;
        }
    }
    return out;
}

ParseOutcome parse_step(std::string_view text) {
    try {
        return ParseOutcome{parse_impl(text), std::nullopt};
    } catch (const ParseError& e) {
        return ParseOutcome{std::nullopt, e};
    }
}

ParseOutcome parse_step_stream(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string buf = ss.str();
    return parse_step(buf);
}

ParseOutcome parse_step_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return ParseOutcome{std::nullopt, ParseError{0, 0, "cannot open " + path}};
    return parse_step_stream(f);
}

std::string diagnostic_dump(const EntityGraph& g) {
    std::ostringstream out;
    for (const auto& [id, inst] : g.entities)
        out << id << '\t' << inst.ifc_type << '\t' << inst.attributes.size() << '\n';
    return out.str();
}

const EntityInstance& EntityGraph::at(InstanceId id) const {
    const EntityInstance* e = find(id);
    if (!e) throw UnknownEntity(id);
    return *e;
}

const std::vector<InstanceId>& EntityGraph::of_type(const std::string& upper_name) const {
    static const std::vector<InstanceId> empty;
    auto it = type_index.find(upper_name);
    return it == type_index.end() ? empty : it->second;
}

std::vector<InstanceId> EntityGraph::referrers_of_type(InstanceId id,
                                                       const std::string& rel_type) const {
    std::vector<InstanceId> out;
    auto it = inverse_index.find(id);
    if (it == inverse_index.end()) return out;
    for (const auto& entry : it->second) {
        const EntityInstance* rel = find(entry.referrer);
        if (rel && rel->ifc_type == rel_type && (out.empty() || out.back() != entry.referrer))
            out.push_back(entry.referrer);
    }
    return out;
}

}  // namespace cobbie::ifc
