#include "hyperad/types.hpp"

#include <cctype>

namespace hyperad {

namespace {

void append_flat(TypeList& out, const Type& t) {
    if (t.is_tensor()) {
        for (const auto& c : t.operands()) append_flat(out, c);
    } else {
        out.push_back(t);
    }
}

std::string list_string(const TypeList& ts) {
    if (ts.size() == 1 && !ts.front().is_arrow()) return ts.front().to_string();
    std::string s = "(";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i) s += ", ";
        s += ts[i].to_string();
    }
    return s + ")";
}

class TypeParser {
public:
    explicit TypeParser(std::string_view text) : text_(text) {}

    Type parse_all() {
        Type t = parse_type();
        skip();
        if (pos_ != text_.size()) fail("trailing input");
        return t;
    }

private:
    Type parse_type() {
        Type lhs = parse_atom();
        skip();
        if (text_.substr(pos_, 2) == "->") {
            pos_ += 2;
            Type rhs = parse_type();
            return Type::arrow(flatten(lhs), flatten(rhs));
        }
        return lhs;
    }

    Type parse_atom() {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end of type");
        if (text_[pos_] == '(') {
            ++pos_;
            TypeList items;
            skip();
            if (pos_ < text_.size() && text_[pos_] == ')') {
                ++pos_;
                return Type::unit();
            }
            for (;;) {
                items.push_back(parse_type());
                skip();
                if (pos_ < text_.size() && text_[pos_] == ',') {
                    ++pos_;
                    continue;
                }
                if (pos_ < text_.size() && text_[pos_] == ')') {
                    ++pos_;
                    break;
                }
                fail("expected ',' or ')'");
            }
            return Type::tensor(items);
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        auto word = text_.substr(start, pos_ - start);
        if (word == "R") return Type::real();
        if (word == "Bundle") return Type::bundle();
        fail("unknown base type '" + std::string(word) + "'");
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw TypeSyntaxError("type syntax error at offset " + std::to_string(pos_) + ": " + what);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Type Type::tensor(const TypeList& components) {
    TypeList flat;
    for (const auto& c : components) append_flat(flat, c);
    if (flat.size() == 1) return flat.front();
    return Type(Kind::Tensor, std::move(flat), {});
}

Type Type::arrow(const TypeList& operands, const TypeList& results) {
    return Type(Kind::Arrow, flatten(operands), flatten(results));
}

bool operator==(const Type& a, const Type& b) {
    return a.kind_ == b.kind_ && a.operands_ == b.operands_ && a.results_ == b.results_;
}

std::string Type::to_string() const {
    switch (kind_) {
        case Kind::Real: return "R";
        case Kind::Bundle: return "Bundle";
        case Kind::Tensor: {
            std::string s = "(";
            for (std::size_t i = 0; i < operands_.size(); ++i) {
                if (i) s += ", ";
                s += operands_[i].to_string();
            }
            return s + ")";
        }
        case Kind::Arrow: {
            std::string rhs = results_.size() == 1 ? results_.front().to_string() : list_string(results_);
            return list_string(operands_) + " -> " + rhs;
        }
    }
    return "?";
}

TypeList flatten(const Type& t) {
    TypeList out;
    append_flat(out, t);
    return out;
}

TypeList flatten(const TypeList& ts) {
    TypeList out;
    for (const auto& t : ts) append_flat(out, t);
    return out;
}

bool first_order(const TypeList& ts) {
    for (const auto& t : ts) {
        if (t.is_arrow()) return false;
        if (t.is_tensor() && !first_order(t.operands())) return false;
    }
    return true;
}

std::string to_string(const TypeList& ts) {
    std::string s = "[";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i) s += ", ";
        s += ts[i].to_string();
    }
    return s + "]";
}

Type parse_type(std::string_view text) { return TypeParser(text).parse_all(); }

}  // namespace hyperad
