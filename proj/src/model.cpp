#include "qrf/model.hpp"

#include "qrf/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>

namespace qrf {

// ---------------------------------------------------------------------------
// SubsystemSpec / CompositeModel
// ---------------------------------------------------------------------------

SpectrumSet SubsystemSpec::spectrum() const {
    SpectrumSet s;
    for (const Level& l : levels) s.insert(l.value, l.label);
    return s;
}

std::vector<std::string> SubsystemSpec::sector_labels() const {
    std::vector<std::string> out;
    for (const Level& l : levels)
        if (std::find(out.begin(), out.end(), l.label) == out.end()) out.push_back(l.label);
    return out;
}

std::optional<long> SubsystemSpec::level_index(long long value, const std::string& label) const {
    for (long i = 0; i < dim(); ++i)
        if (levels[i].value == value && levels[i].label == label) return i;
    return std::nullopt;
}

const SubsystemSpec& CompositeModel::subsystem(char name) const {
    switch (name) {
    case 'A': return subsystems[0];
    case 'B': return subsystems[1];
    case 'C': return subsystems[2];
    }
    fail(ErrorKind::Precondition, std::string("unknown subsystem '") + name + "'");
}

long CompositeModel::kin_dim() const {
    return subsystems[0].dim() * subsystems[1].dim() * subsystems[2].dim();
}

long CompositeModel::flat_index(const KinIndex& x) const {
    return (x.a * subsystems[1].dim() + x.b) * subsystems[2].dim() + x.c;
}

KinIndex CompositeModel::unflatten(long flat) const {
    KinIndex x;
    x.c = flat % subsystems[2].dim();
    flat /= subsystems[2].dim();
    x.b = flat % subsystems[1].dim();
    x.a = flat / subsystems[1].dim();
    return x;
}

std::pair<char, char> CompositeModel::complement(char k) const {
    switch (k) {
    case 'A': return {'B', 'C'};
    case 'B': return {'A', 'C'};
    case 'C': return {'A', 'B'};
    }
    fail(ErrorKind::Precondition, std::string("unknown subsystem '") + k + "'");
}

long long CompositeModel::wrap_value(long long v) const {
    if (!cyclic_modulus) return v;
    long long n = *cyclic_modulus;
    return ((v % n) + n) % n;
}

long long CompositeModel::mod_group(long long v) const {
    long long n = orientation_group_size;
    return ((v % n) + n) % n;
}

long long CompositeModel::constraint_value(const KinIndex& x) const {
    long long s = subsystems[0].levels[x.a].value + subsystems[1].levels[x.b].value +
                  subsystems[2].levels[x.c].value;
    return wrap_value(s);
}

// ---------------------------------------------------------------------------
// Model file parsing (strict subset of TOML covering the documented schema)
// ---------------------------------------------------------------------------

namespace {

struct Token {
    enum Kind { LBrack, RBrack, LBrace, RBrace, Equals, Comma, Str, Int, Key, End } kind;
    std::string text;
    long long ival = 0;
    int line = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_trivia();
        Token t;
        t.line = line_;
        if (pos_ >= text_.size()) {
            t.kind = Token::End;
            return t;
        }
        char c = text_[pos_];
        switch (c) {
        case '[': ++pos_; t.kind = Token::LBrack; return t;
        case ']': ++pos_; t.kind = Token::RBrack; return t;
        case '{': ++pos_; t.kind = Token::LBrace; return t;
        case '}': ++pos_; t.kind = Token::RBrace; return t;
        case '=': ++pos_; t.kind = Token::Equals; return t;
        case ',': ++pos_; t.kind = Token::Comma; return t;
        case '"': return lex_string();
        default: break;
        }
        if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) return lex_int();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_key();
        fail(ErrorKind::Validation,
             "line " + std::to_string(line_) + ": unexpected character '" + c + "'");
    }

private:
    void skip_trivia() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    Token lex_string() {
        Token t;
        t.line = line_;
        t.kind = Token::Str;
        ++pos_; // opening quote
        while (pos_ < text_.size() && text_[pos_] != '"') {
            char c = text_[pos_];
            if (c == '\n') fail(ErrorKind::Validation, "line " + std::to_string(line_) +
                                                           ": unterminated string");
            if (c == '\\' && pos_ + 1 < text_.size()) {
                ++pos_;
                c = text_[pos_];
            }
            t.text += c;
            ++pos_;
        }
        if (pos_ >= text_.size())
            fail(ErrorKind::Validation, "line " + std::to_string(line_) + ": unterminated string");
        ++pos_; // closing quote
        return t;
    }

    Token lex_int() {
        Token t;
        t.line = line_;
        t.kind = Token::Int;
        size_t start = pos_;
        if (text_[pos_] == '-' || text_[pos_] == '+') ++pos_;
        size_t digits = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
            ++digits;
        }
        if (digits == 0)
            fail(ErrorKind::Validation, "line " + std::to_string(line_) + ": malformed integer");
        t.text = text_.substr(start, pos_ - start);
        t.ival = std::stoll(t.text);
        return t;
    }

    Token lex_key() {
        Token t;
        t.line = line_;
        t.kind = Token::Key;
        size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')
                ++pos_;
            else
                break;
        }
        t.text = text_.substr(start, pos_ - start);
        return t;
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
};

struct TomlValue {
    enum Kind { Int, Str, Array, Table } kind = Int;
    long long i = 0;
    std::string s;
    std::vector<TomlValue> arr;
    std::vector<std::pair<std::string, TomlValue>> table;
    int line = 0;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lexer_(text) { advance(); }

    // document := (table-header | key-value)*
    void parse(std::vector<std::pair<std::string, TomlValue>>& root,
               std::vector<std::vector<std::pair<std::string, TomlValue>>>& subsystems) {
        auto* current = &root;
        while (cur_.kind != Token::End) {
            if (cur_.kind == Token::LBrack) {
                expect(Token::LBrack);
                expect(Token::LBrack);
                Token name = expect(Token::Key);
                if (name.text != "subsystem")
                    fail(ErrorKind::Validation, "line " + std::to_string(name.line) +
                                                    ": unknown table [[" + name.text + "]]");
                expect(Token::RBrack);
                expect(Token::RBrack);
                subsystems.emplace_back();
                current = &subsystems.back();
            } else if (cur_.kind == Token::Key) {
                Token key = expect(Token::Key);
                expect(Token::Equals);
                current->emplace_back(key.text, parse_value());
            } else {
                fail(ErrorKind::Validation,
                     "line " + std::to_string(cur_.line) + ": expected a key or [[subsystem]]");
            }
        }
    }

private:
    TomlValue parse_value() {
        TomlValue v;
        v.line = cur_.line;
        switch (cur_.kind) {
        case Token::Int:
            v.kind = TomlValue::Int;
            v.i = cur_.ival;
            advance();
            return v;
        case Token::Str:
            v.kind = TomlValue::Str;
            v.s = cur_.text;
            advance();
            return v;
        case Token::LBrack: {
            advance();
            v.kind = TomlValue::Array;
            while (cur_.kind != Token::RBrack) {
                v.arr.push_back(parse_value());
                if (cur_.kind == Token::Comma)
                    advance();
                else
                    break;
            }
            expect(Token::RBrack);
            return v;
        }
        case Token::LBrace: {
            advance();
            v.kind = TomlValue::Table;
            while (cur_.kind != Token::RBrace) {
                Token key = expect(Token::Key);
                expect(Token::Equals);
                v.table.emplace_back(key.text, parse_value());
                if (cur_.kind == Token::Comma)
                    advance();
                else
                    break;
            }
            expect(Token::RBrace);
            return v;
        }
        default:
            fail(ErrorKind::Validation,
                 "line " + std::to_string(cur_.line) + ": expected a value");
        }
    }

    Token expect(Token::Kind kind) {
        if (cur_.kind != kind)
            fail(ErrorKind::Validation, "line " + std::to_string(cur_.line) + ": unexpected token");
        Token t = cur_;
        advance();
        return t;
    }

    void advance() { cur_ = lexer_.next(); }

    Lexer lexer_;
    Token cur_;
};

struct Rational {
    long long num = 0;
    long long den = 1;
};

Rational parse_rational(const std::string& text, int line) {
    auto bad = [&]() -> Rational {
        fail(ErrorKind::Validation,
             "line " + std::to_string(line) + ": '" + text + "' is not an integer or fraction");
    };
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (s.empty()) return bad();
    size_t slash = s.find('/');
    try {
        size_t used = 0;
        Rational r;
        if (slash == std::string::npos) {
            r.num = std::stoll(s, &used);
            if (used != s.size()) return bad();
        } else {
            r.num = std::stoll(s.substr(0, slash), &used);
            if (used != slash) return bad();
            std::string den = s.substr(slash + 1);
            r.den = std::stoll(den, &used);
            if (used != den.size()) return bad();
        }
        if (r.den == 0) fail(ErrorKind::Validation, "line " + std::to_string(line) +
                                                        ": zero denominator in '" + text + "'");
        if (r.den < 0) {
            r.den = -r.den;
            r.num = -r.num;
        }
        long long g = std::gcd(std::abs(r.num), r.den);
        if (g > 1) {
            r.num /= g;
            r.den /= g;
        }
        return r;
    } catch (const std::exception&) {
        return bad();
    }
}

long long lcm_ll(long long a, long long b) { return a / std::gcd(a, b) * b; }

struct RawLevel {
    Rational value;
    std::string label;
};

struct RawSubsystem {
    char name = 0;
    std::vector<RawLevel> levels;
};

// Largest |c - c'| over one subsystem spectrum or one pairwise sum spectrum;
// N_g must exceed it for the discrete-Fourier orthogonality to be exact.
long long min_group_size(const CompositeModel& m) {
    auto diameter = [](const IntSet& s) -> long long {
        if (s.empty()) return 0;
        return *s.rbegin() - *s.begin();
    };
    long long d = 0;
    for (const auto& sub : m.subsystems) d = std::max(d, diameter(sub.spectrum().values()));
    const char names[3] = {'A', 'B', 'C'};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            IntSet sums = minkowski_sum(m.subsystem(names[i]).spectrum().values(),
                                        m.subsystem(names[j]).spectrum().values());
            d = std::max(d, diameter(sums));
        }
    return d + 1;
}

long long default_group_size(const CompositeModel& m) {
    long long maxabs = 0;
    const char names[3] = {'A', 'B', 'C'};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            for (long long s : minkowski_sum(m.subsystem(names[i]).spectrum().values(),
                                             m.subsystem(names[j]).spectrum().values()))
                maxabs = std::max(maxabs, std::abs(s));
    return 2 * maxabs + 1;
}

} // namespace

CompositeModel load_model(const std::string& text) {
    std::vector<std::pair<std::string, TomlValue>> root;
    std::vector<std::vector<std::pair<std::string, TomlValue>>> subs;
    Parser(text).parse(root, subs);

    std::optional<long long> scale_hint, cyclic_modulus, group_size;
    for (const auto& [key, value] : root) {
        auto read_int = [&](std::optional<long long>& slot) {
            if (slot) fail(ErrorKind::Validation, "duplicate key '" + key + "'");
            if (value.kind != TomlValue::Int)
                fail(ErrorKind::Validation, "key '" + key + "' must be an integer");
            slot = value.i;
        };
        if (key == "scale_hint")
            read_int(scale_hint);
        else if (key == "cyclic_modulus")
            read_int(cyclic_modulus);
        else if (key == "orientation_group_size")
            read_int(group_size);
        else
            fail(ErrorKind::Validation, "unknown key '" + key + "'");
    }

    if (subs.size() != 3)
        fail(ErrorKind::Validation,
             "expected exactly three [[subsystem]] tables, found " + std::to_string(subs.size()));

    std::array<std::optional<RawSubsystem>, 3> raw; // A, B, C
    for (const auto& table : subs) {
        RawSubsystem rs;
        bool have_levels = false;
        for (const auto& [key, value] : table) {
            if (key == "name") {
                if (value.kind != TomlValue::Str || value.s.size() != 1 ||
                    (value.s[0] != 'A' && value.s[0] != 'B' && value.s[0] != 'C'))
                    fail(ErrorKind::Validation, "subsystem name must be \"A\", \"B\" or \"C\"");
                rs.name = value.s[0];
            } else if (key == "levels") {
                if (value.kind != TomlValue::Array)
                    fail(ErrorKind::Validation, "'levels' must be an array of tables");
                have_levels = true;
                for (const TomlValue& entry : value.arr) {
                    if (entry.kind != TomlValue::Table)
                        fail(ErrorKind::Validation, "each level must be { value = ..., label = ... }");
                    RawLevel lvl;
                    bool have_value = false, have_label = false;
                    for (const auto& [lk, lv] : entry.table) {
                        if (lk == "value") {
                            have_value = true;
                            if (lv.kind == TomlValue::Int)
                                lvl.value = Rational{lv.i, 1};
                            else if (lv.kind == TomlValue::Str)
                                lvl.value = parse_rational(lv.s, lv.line);
                            else
                                fail(ErrorKind::Validation,
                                     "level value must be an integer or a fraction string");
                        } else if (lk == "label") {
                            have_label = true;
                            if (lv.kind != TomlValue::Str)
                                fail(ErrorKind::Validation, "level label must be a string");
                            lvl.label = lv.s;
                        } else {
                            fail(ErrorKind::Validation, "unknown level key '" + lk + "'");
                        }
                    }
                    if (!have_value || !have_label)
                        fail(ErrorKind::Validation, "level needs both value and label");
                    rs.levels.push_back(std::move(lvl));
                }
            } else {
                fail(ErrorKind::Validation, "unknown subsystem key '" + key + "'");
            }
        }
        if (!rs.name) fail(ErrorKind::Validation, "subsystem missing 'name'");
        if (!have_levels || rs.levels.empty())
            fail(ErrorKind::Validation,
                 std::string("subsystem ") + rs.name + " needs at least one level");
        int slot = rs.name - 'A';
        if (raw[slot]) fail(ErrorKind::Validation, std::string("duplicate subsystem ") + rs.name);
        raw[slot] = std::move(rs);
    }
    for (int i = 0; i < 3; ++i)
        if (!raw[i])
            fail(ErrorKind::Validation, std::string("missing subsystem ") + char('A' + i));

    // Clear denominators: scale = lcm of all denominators (and the hint).
    long long scale = 1;
    for (const auto& rs : raw)
        for (const RawLevel& lvl : rs->levels) scale = lcm_ll(scale, lvl.value.den);
    if (scale_hint) {
        if (*scale_hint < 1) fail(ErrorKind::Validation, "scale_hint must be positive");
        scale = lcm_ll(scale, *scale_hint);
    }

    CompositeModel m;
    m.scale = scale;
    for (int i = 0; i < 3; ++i) {
        SubsystemSpec spec;
        spec.name = char('A' + i);
        for (const RawLevel& lvl : raw[i]->levels)
            spec.levels.push_back(Level{lvl.value.num * (scale / lvl.value.den), lvl.label});
        for (size_t p = 0; p < spec.levels.size(); ++p)
            for (size_t q = p + 1; q < spec.levels.size(); ++q)
                if (spec.levels[p].value == spec.levels[q].value &&
                    spec.levels[p].label == spec.levels[q].label)
                    fail(ErrorKind::Validation,
                         std::string("subsystem ") + spec.name + ": duplicate level (value " +
                             std::to_string(spec.levels[p].value) + ", label \"" +
                             spec.levels[p].label + "\")");
        m.subsystems[i] = std::move(spec);
    }

    if (cyclic_modulus) {
        long long n = *cyclic_modulus;
        if (n < 1) fail(ErrorKind::Validation, "cyclic_modulus must be positive");
        if (scale != 1)
            fail(ErrorKind::Validation, "cyclic models require integer eigenvalues (scale 1)");
        m.cyclic_modulus = n;
        for (const auto& sub : m.subsystems)
            for (const Level& lvl : sub.levels)
                if (lvl.value < 0 || lvl.value >= n)
                    fail(ErrorKind::Validation,
                         std::string("subsystem ") + sub.name + ": eigenvalue " +
                             std::to_string(lvl.value) + " outside {0.." + std::to_string(n - 1) +
                             "}");
        if (group_size && *group_size != n)
            fail(ErrorKind::Validation, "orientation_group_size must equal cyclic_modulus");
        m.orientation_group_size = n;
    } else {
        long long minimal = min_group_size(m);
        if (group_size) {
            if (*group_size < minimal)
                fail(ErrorKind::Validation,
                     "orientation_group_size " + std::to_string(*group_size) +
                         " is too small; the minimal admissible value for this model is " +
                         std::to_string(minimal));
            m.orientation_group_size = *group_size;
        } else {
            m.orientation_group_size = std::max(default_group_size(m), minimal);
        }
    }
    return m;
}

CompositeModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Validation, "cannot open model file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_model(ss.str());
}

std::string to_toml(const CompositeModel& model) {
    std::ostringstream out;
    if (model.scale > 1) out << "scale_hint = " << model.scale << "\n";
    if (model.cyclic_modulus) out << "cyclic_modulus = " << *model.cyclic_modulus << "\n";
    out << "orientation_group_size = " << model.orientation_group_size << "\n";
    for (const auto& sub : model.subsystems) {
        out << "\n[[subsystem]]\n";
        out << "name = \"" << sub.name << "\"\n";
        out << "levels = [";
        for (size_t i = 0; i < sub.levels.size(); ++i) {
            const Level& lvl = sub.levels[i];
            out << (i ? ", " : " ") << "{ value = ";
            if (model.scale == 1) {
                out << lvl.value;
            } else {
                long long g = std::gcd(std::abs(lvl.value), model.scale);
                long long num = lvl.value / g, den = model.scale / g;
                out << '"' << num;
                if (den != 1) out << '/' << den;
                out << '"';
            }
            out << ", label = \"" << lvl.label << "\" }";
        }
        out << " ]\n";
    }
    return out.str();
}

LabeledOperator constraint_operator(const CompositeModel& model) {
    ComplexMatrix m(model.kin_dim(), model.kin_dim());
    for (long f = 0; f < model.kin_dim(); ++f)
        m.at(f, f) = static_cast<double>(model.constraint_value(model.unflatten(f)));
    return {SpaceTag{SpaceKind::Kinematical}, std::move(m)};
}

LabeledOperator local_operator(const CompositeModel& model, char target, const ComplexMatrix& m) {
    const SubsystemSpec& sub = model.subsystem(target);
    if (!m.is_square() || m.rows() != sub.dim())
        fail(ErrorKind::Dimension, std::string("operator for subsystem ") + target + " must be " +
                                       std::to_string(sub.dim()) + "x" + std::to_string(sub.dim()));
    const ComplexMatrix ia = ComplexMatrix::identity(model.subsystems[0].dim());
    const ComplexMatrix ib = ComplexMatrix::identity(model.subsystems[1].dim());
    const ComplexMatrix ic = ComplexMatrix::identity(model.subsystems[2].dim());
    ComplexMatrix full;
    switch (target) {
    case 'A': full = tensor_product(tensor_product(m, ib), ic); break;
    case 'B': full = tensor_product(tensor_product(ia, m), ic); break;
    default: full = tensor_product(tensor_product(ia, ib), m); break;
    }
    return {SpaceTag{SpaceKind::Kinematical}, std::move(full)};
}

} // namespace qrf
