#include "fragtree/newick.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace fragtree {

namespace {

void format_length(std::ostringstream& out, double len) {
    if (len == std::floor(len) && std::fabs(len) < 1e15) {
        out << static_cast<long long>(len);
    } else {
        out.precision(17);
        out << len;
    }
}

void write_node(std::ostringstream& out, const EdgeWeightedTree& t, int v) {
    const auto& node = t.shape().node(v);
    if (t.shape().is_leaf(v)) {
        out << node.label;
    } else {
        out << '(';
        for (std::size_t i = 0; i < node.children.size(); ++i) {
            if (i) out << ',';
            write_node(out, t, node.children[i]);
        }
        out << ')';
    }
    out << ':';
    format_length(out, t.edge_length(v));
}

// Grammar (planted trees, ROOT is the unnamed outer group):
//   tree  := '(' node ')' ';'
//   node  := (leaf | '(' node (',' node)+ ')') ':' length
class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    EdgeWeightedTree run() {
        skip_space();
        expect('(', "expected '('");
        Cladogram::Builder builder;
        builder.add_root();
        lengths_ = {0.0};
        parse_node(builder, Cladogram::kRoot);
        skip_space();
        expect(')', "expected ')'");
        skip_space();
        expect(';', "expected ';'");
        skip_space();
        if (pos_ != text_.size()) fail("trailing characters");
        return EdgeWeightedTree(std::move(builder).build(), std::move(lengths_));
    }

private:
    void parse_node(Cladogram::Builder& builder, int parent) {
        skip_space();
        if (peek() == '(') {
            std::size_t open_pos = pos_;
            ++pos_;
            int me = builder.add_internal(parent);
            lengths_.push_back(0.0); // patched once the trailing length is read
            std::size_t my_index = lengths_.size() - 1;
            int members = 0;
            for (;;) {
                parse_node(builder, me);
                ++members;
                skip_space();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                break;
            }
            expect(')', "expected ',' or ')'");
            if (members < 2) fail_at("internal node needs at least 2 children", open_pos);
            lengths_[my_index] = parse_length();
        } else {
            Label label = parse_label();
            builder.add_leaf(parent, label);
            lengths_.push_back(parse_length());
        }
    }

    Label parse_label() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected a numeric leaf label");
        Label label = 0;
        auto [p, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, label);
        (void)p;
        if (ec != std::errc()) fail_at("bad leaf label", start);
        return label;
    }

    double parse_length() {
        skip_space();
        expect(':', "expected ':length'");
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                text_[pos_] == '-' || text_[pos_] == '+' || text_[pos_] == 'e' || text_[pos_] == 'E'))
            ++pos_;
        if (pos_ == start) fail("expected a branch length");
        double len = 0.0;
        try {
            len = std::stod(text_.substr(start, pos_ - start));
        } catch (const std::exception&) {
            fail_at("bad branch length", start);
        }
        if (!(len > 0.0)) fail_at("branch length must be positive", start);
        return len;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    void expect(char c, const std::string& what) {
        if (peek() != c) fail(what);
        ++pos_;
    }
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& what) const { throw NewickError(what, pos_); }
    [[noreturn]] void fail_at(const std::string& what, std::size_t at) const {
        throw NewickError(what, at);
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    std::vector<double> lengths_;
};

} // namespace

std::string to_newick(const EdgeWeightedTree& tree) {
    std::ostringstream out;
    out << '(';
    write_node(out, tree, tree.shape().top());
    out << ");";
    return out.str();
}

std::string to_newick(const Cladogram& tree) {
    return to_newick(EdgeWeightedTree::unit(tree));
}

EdgeWeightedTree parse_newick(const std::string& text) {
    return Parser(text).run();
}

} // namespace fragtree
