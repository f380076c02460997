#include "treecount/xpath.hpp"

namespace treecount {

namespace {

using XK = XPathExpr::Kind;
using QK = XQualifier::Kind;
using Rel = std::vector<NodeSet>;

constexpr Modality kFc = Modality::FirstChild, kNs = Modality::NextSibling, kPa = Modality::Parent,
                   kPs = Modality::PrevSibling;

// Unranked navigation over the binary encoding; ids are document order.
class Nav {
 public:
  explicit Nav(const BinTree& t) : t_(t), n_(t.size()), parent_(n_, BinTree::kNone), end_(n_) {
    for (int x = n_ - 1; x >= 0; --x) {
      int c = t.step(x, kFc);
      // last node of the subtree below x, in preorder
      int last = x;
      for (; c != BinTree::kNone; c = t.step(c, kNs)) {
        parent_[c] = x;
        last = end_[c];
      }
      end_[x] = last;
    }
  }

  NodeSet axis(Axis a, int x) const {
    NodeSet s(n_);
    switch (a) {
      case Axis::Self: s[x] = true; break;
      case Axis::Child:
        for (int c = t_.step(x, kFc); c != BinTree::kNone; c = t_.step(c, kNs)) s[c] = true;
        break;
      case Axis::Parent:
        if (parent_[x] != BinTree::kNone) s[parent_[x]] = true;
        break;
      case Axis::Descendant:
        for (int y = x + 1; y <= end_[x]; ++y) s[y] = true;
        break;
      case Axis::Ancestor:
        for (int y = parent_[x]; y != BinTree::kNone; y = parent_[y]) s[y] = true;
        break;
      case Axis::FollowingSibling:
        for (int y = t_.step(x, kNs); y != BinTree::kNone; y = t_.step(y, kNs)) s[y] = true;
        break;
      case Axis::PrecedingSibling:
        for (int y = t_.step(x, kPs); y != BinTree::kNone; y = t_.step(y, kPs)) s[y] = true;
        break;
      case Axis::Following:
        for (int y = end_[x] + 1; y < n_; ++y) s[y] = true;
        break;
      case Axis::Preceding: {
        NodeSet anc = axis(Axis::Ancestor, x);
        for (int y = 0; y < x; ++y) s[y] = !anc[y];
        break;
      }
    }
    return s;
  }

  bool test(const std::string& name, int y) const { return name == "*" || t_.label(y) == name; }
  int size() const { return n_; }
  const BinTree& tree() const { return t_; }

 private:
  const BinTree& t_;
  int n_;
  std::vector<int> parent_;
  std::vector<int> end_;
};

bool compare(std::size_t n, CountCmp c, std::uint64_t k) {
  switch (c) {
    case CountCmp::Lt: return n < k;
    case CountCmp::Le: return n <= k;
    case CountCmp::Gt: return n > k;
    case CountCmp::Ge: return n >= k;
    case CountCmp::Eq: return n == k;
  }
  return false;
}

std::size_t count(const NodeSet& s) {
  std::size_t n = 0;
  for (bool b : s) n += b;
  return n;
}

Rel rel(const XPathExpr& e, const Nav& nav);

NodeSet qual(const XQualifier& q, const Nav& nav) {
  const int n = nav.size();
  NodeSet out(n);
  switch (q.kind) {
    case QK::Path: {
      Rel r = rel(*q.path, nav);
      for (int x = 0; x < n; ++x) out[x] = count(r[x]) > 0;
      return out;
    }
    case QK::Count: {
      Rel r = rel(*q.path, nav);
      for (int x = 0; x < n; ++x) out[x] = compare(count(r[x]), q.cmp, q.k);
      return out;
    }
    case QK::Not: {
      NodeSet s = qual(*q.lhs, nav);
      for (int x = 0; x < n; ++x) out[x] = !s[x];
      return out;
    }
    case QK::And:
    case QK::Or: {
      NodeSet a = qual(*q.lhs, nav), b = qual(*q.rhs, nav);
      for (int x = 0; x < n; ++x) out[x] = q.kind == QK::And ? a[x] && b[x] : a[x] || b[x];
      return out;
    }
    case QK::Nominal:
      for (int x = 0; x < n; ++x) out[x] = nav.tree().marked("@" + q.name, x);
      return out;
  }
  return out;
}

Rel rel(const XPathExpr& e, const Nav& nav) {
  const int n = nav.size();
  Rel r(n, NodeSet(n));
  switch (e.kind) {
    case XK::Step:
      for (int x = 0; x < n; ++x) {
        r[x] = nav.axis(e.axis, x);
        for (int y = 0; y < n; ++y) r[x][y] = r[x][y] && nav.test(e.test, y);
      }
      return r;
    case XK::Seq: {
      Rel a = rel(*e.lhs, nav), b = rel(*e.rhs, nav);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if (a[x][y])
            for (int z = 0; z < n; ++z) r[x][z] = r[x][z] || b[y][z];
      return r;
    }
    case XK::Qualified: {
      Rel a = rel(*e.lhs, nav);
      NodeSet q = qual(*e.qual, nav);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) r[x][y] = a[x][y] && q[y];
      return r;
    }
    case XK::Position: {
      Rel a = rel(*e.lhs, nav);
      for (int x = 0; x < n; ++x) {
        std::uint64_t seen = 0;
        for (int y = 0; y < n; ++y)
          if (a[x][y] && ++seen == e.k) r[x][y] = true;
      }
      return r;
    }
    case XK::Root: {
      Rel a = rel(*e.lhs, nav);
      if (n) r[0] = a[0];
      return r;
    }
    case XK::Union:
    case XK::Intersect:
    case XK::Except: {
      Rel a = rel(*e.lhs, nav), b = rel(*e.rhs, nav);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          r[x][y] = e.kind == XK::Union ? a[x][y] || b[x][y]
                    : e.kind == XK::Intersect ? a[x][y] && b[x][y]
                                              : a[x][y] && !b[x][y];
      return r;
    }
  }
  return r;
}

}  // namespace

std::vector<NodeSet> eval_xpath(const XPathExpr& e, const BinTree& t) { return rel(e, Nav(t)); }

std::vector<NodeSet> eval_xpath(const XPathExpr& e, const NaryTree& t) {
  BinTree b = nary_to_binary(t);
  return rel(e, Nav(b));
}

NodeSet select_from_root(const XPathExpr& e, const BinTree& t) {
  if (t.size() == 0) return {};
  return eval_xpath(e, t)[0];
}

}  // namespace treecount
