#include "treecount/tree.hpp"

#include <cctype>
#include <functional>

#include "treecount/error.hpp"

namespace treecount {

namespace {
constexpr int kFc = 0, kNs = 1, kPa = 2, kPs = 3;
}

bool BinTree::marked(const std::string& prop, int n) const {
  auto it = marks_.find(prop);
  return it != marks_.end() && it->second[n];
}

void BinTree::set_mark(const std::string& prop, int n, bool on) {
  auto& v = marks_[prop];
  v.resize(size(), false);
  v[n] = on;
}

BinTree BinTree::from_links(int top, const std::vector<int>& fc, const std::vector<int>& ns,
                            const std::vector<std::string>& labels) {
  BinTree t;
  if (top < 0) return t;
  std::vector<int> order;
  std::vector<int> stack{top};
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    order.push_back(n);
    if (ns[n] >= 0) stack.push_back(ns[n]);
    if (fc[n] >= 0) stack.push_back(fc[n]);
  }
  std::vector<int> id(fc.size(), kNone);
  for (std::size_t i = 0; i < order.size(); ++i) id[order[i]] = static_cast<int>(i);
  t.adj_.assign(order.size(), {kNone, kNone, kNone, kNone});
  t.label_.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    int old = order[i];
    t.label_[i] = labels[old];
    if (fc[old] >= 0) {
      int c = id[fc[old]];
      t.adj_[i][kFc] = c;
      t.adj_[c][kPa] = static_cast<int>(i);
    }
    if (ns[old] >= 0) {
      int s = id[ns[old]];
      t.adj_[i][kNs] = s;
      t.adj_[s][kPs] = static_cast<int>(i);
    }
  }
  return t;
}

std::string BinTree::path(int n) const {
  // climb to the top level, recording 1-based sibling positions
  std::vector<int> pos;
  int cur = n;
  while (cur != kNone) {
    int k = 1;
    while (adj_[cur][kPs] != kNone) {
      cur = adj_[cur][kPs];
      ++k;
    }
    pos.push_back(k);
    cur = adj_[cur][kPa];
  }
  std::string out;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) out += "/" + std::to_string(*it);
  return out;
}

namespace {

void flatten(const NaryTree& t, int& next, std::vector<int>& fc, std::vector<int>& ns,
             std::vector<std::string>& labels, int& self) {
  self = next++;
  fc.push_back(-1);
  ns.push_back(-1);
  labels.push_back(t.label);
  int prev = -1;
  for (const NaryTree& c : t.children) {
    int cid;
    flatten(c, next, fc, ns, labels, cid);
    if (prev < 0) fc[self] = cid;
    else ns[prev] = cid;
    prev = cid;
  }
}

}  // namespace

BinTree forest_to_binary(const std::vector<NaryTree>& forest) {
  std::vector<int> fc, ns;
  std::vector<std::string> labels;
  int next = 0, prev = -1, first = -1;
  for (const NaryTree& t : forest) {
    int id;
    flatten(t, next, fc, ns, labels, id);
    if (prev < 0) first = id;
    else ns[prev] = id;
    prev = id;
  }
  return BinTree::from_links(first, fc, ns, labels);
}

BinTree nary_to_binary(const NaryTree& t) { return forest_to_binary({t}); }

namespace {
NaryTree decode(const BinTree& t, int n) {
  NaryTree out{t.label(n), {}};
  for (int c = t.step(n, Modality::FirstChild); c != BinTree::kNone; c = t.step(c, Modality::NextSibling))
    out.children.push_back(decode(t, c));
  return out;
}
}  // namespace

std::vector<NaryTree> binary_to_forest(const BinTree& t) {
  std::vector<NaryTree> out;
  if (t.size() == 0) return out;
  for (int n = t.root(); n != BinTree::kNone; n = t.step(n, Modality::NextSibling)) out.push_back(decode(t, n));
  return out;
}

NaryTree binary_to_nary(const BinTree& t) {
  if (t.size() == 0) throw Error("empty tree");
  if (t.has_next_sibling_root()) throw Error("binary root has a next sibling: the tree encodes a hedge");
  return decode(t, t.root());
}

namespace {

void term(const NaryTree& t, std::string& out) {
  out += t.label;
  if (t.children.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i) out += ", ";
    term(t.children[i], out);
  }
  out += ')';
}

void xml(const NaryTree& t, std::string& out) {
  if (t.children.empty()) {
    out += "<" + t.label + "/>";
    return;
  }
  out += "<" + t.label + ">";
  for (const auto& c : t.children) xml(c, out);
  out += "</" + t.label + ">";
}

bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'; }

class TreeParser {
 public:
  explicit TreeParser(std::string_view s) : s_(s) {}

  std::vector<NaryTree> forest() {
    space();
    std::vector<NaryTree> out;
    if (peek() == '<') {
      while (peek() == '<') {
        out.push_back(element());
        space();
      }
    } else {
      out.push_back(term_node());
      space();
      while (peek() == ',') {
        ++pos_;
        out.push_back(term_node());
        space();
      }
    }
    if (pos_ < s_.size()) fail("unexpected trailing input");
    return out;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(what, line, col);
  }
  std::string name() {
    space();
    std::size_t start = pos_;
    while (pos_ < s_.size() && name_char(s_[pos_])) ++pos_;
    if (start == pos_) fail("expected a label");
    return std::string(s_.substr(start, pos_ - start));
  }

  NaryTree term_node() {
    NaryTree t{name(), {}};
    space();
    if (peek() == '(') {
      ++pos_;
      space();
      if (peek() == ')') fail("empty child list");
      for (;;) {
        t.children.push_back(term_node());
        space();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ')') {
          ++pos_;
          break;
        }
        fail("expected ',' or ')'");
      }
    }
    return t;
  }

  NaryTree element() {
    if (peek() != '<') fail("expected '<'");
    ++pos_;
    NaryTree t{name(), {}};
    space();
    if (peek() == '/') {
      ++pos_;
      if (peek() != '>') fail("expected '>'");
      ++pos_;
      return t;
    }
    if (peek() != '>') fail("expected '>' (attributes are not supported)");
    ++pos_;
    for (;;) {
      space();
      if (peek() != '<') fail(pos_ >= s_.size() ? "unterminated element <" + t.label + ">" : "text content is not supported");
      if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '/') {
        pos_ += 2;
        std::string close = name();
        if (close != t.label) fail("mismatched closing tag </" + close + "> for <" + t.label + ">");
        space();
        if (peek() != '>') fail("expected '>'");
        ++pos_;
        return t;
      }
      t.children.push_back(element());
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_term(const NaryTree& t) {
  std::string s;
  term(t, s);
  return s;
}

std::string to_term(const BinTree& t) {
  std::string s;
  auto forest = binary_to_forest(t);
  for (std::size_t i = 0; i < forest.size(); ++i) {
    if (i) s += ", ";
    term(forest[i], s);
  }
  return s;
}

std::string to_xml(const BinTree& t) {
  std::string s;
  for (const auto& n : binary_to_forest(t)) xml(n, s);
  return s;
}

BinTree parse_tree(std::string_view text) { return forest_to_binary(TreeParser(text).forest()); }

NaryTree parse_nary(std::string_view text) {
  auto f = TreeParser(text).forest();
  if (f.size() != 1) throw SyntaxError("expected a single tree, found a hedge", 1, 1);
  return f[0];
}

}  // namespace treecount
