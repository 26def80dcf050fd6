#include "paramex/slope.hpp"

#include <unordered_map>

namespace paramex {

namespace {

// -------------------------------------------------------------------------
// First order
// -------------------------------------------------------------------------

struct Node1 {
    Interval vc{0.0};  // value at center
    Interval vb{0.0};  // value over box
    std::vector<Interval> row;
};

class FirstOrder {
  public:
    FirstOrder(int n, int p, const Box& xc, const Box& sc, const Box& xb, const Box& sb)
        : n_(n), m_(n + p), xc_(xc), sc_(sc), xb_(xb), sb_(sb) {
        detail::require(xc.dim() == n && xb.dim() == n, "slope: state box dimension mismatch");
        detail::require(sc.dim() == p && sb.dim() == p, "slope: parameter box dimension mismatch");
    }

    const Node1& eval(const ExprPtr& e) {
        auto it = memo_.find(e.get());
        if (it != memo_.end()) return it->second;
        Node1 node = compute(e);
        return memo_.emplace(e.get(), std::move(node)).first->second;
    }

  private:
    Node1 compute(const ExprPtr& e) {
        Node1 r;
        r.row.assign(m_, Interval(0.0));
        switch (e->kind) {
            case Expr::Kind::Constant:
                r.vc = e->value;
                r.vb = e->value;
                return r;
            case Expr::Kind::Variable: {
                int col = e->var_class == VarClass::state ? e->index : n_ + e->index;
                r.vc = e->var_class == VarClass::state ? xc_[e->index] : sc_[e->index];
                r.vb = e->var_class == VarClass::state ? xb_[e->index] : sb_[e->index];
                r.row[col] = Interval(1.0);
                return r;
            }
            case Expr::Kind::Neg: {
                const Node1& u = eval(e->a);
                r.vc = -u.vc;
                r.vb = -u.vb;
                for (int j = 0; j < m_; ++j) r.row[j] = -u.row[j];
                return r;
            }
            case Expr::Kind::Add: {
                const Node1& u = eval(e->a);
                const Node1& v = eval(e->b);
                r.vc = u.vc + v.vc;
                r.vb = u.vb + v.vb;
                for (int j = 0; j < m_; ++j) r.row[j] = u.row[j] + v.row[j];
                return r;
            }
            case Expr::Kind::Sub: {
                const Node1& u = eval(e->a);
                const Node1& v = eval(e->b);
                r.vc = u.vc - v.vc;
                r.vb = u.vb - v.vb;
                for (int j = 0; j < m_; ++j) r.row[j] = u.row[j] - v.row[j];
                return r;
            }
            case Expr::Kind::Mul: return product(eval(e->a), eval(e->b));
            case Expr::Kind::Div: return quotient(eval(e->a), eval(e->b));
            case Expr::Kind::Pow: {
                const Node1& u = eval(e->a);
                Node1 acc = u;
                for (int i = 1; i < e->exponent; ++i) acc = product(acc, u);
                acc.vc = intersect(acc.vc, pow_int(u.vc, e->exponent));
                acc.vb = intersect(acc.vb, pow_int(u.vb, e->exponent));
                return acc;
            }
        }
        throw Error("unreachable expression kind");
    }

    // S_uv = S_u v(box) + u(center) S_v
    Node1 product(const Node1& u, const Node1& v) {
        Node1 r;
        r.vc = u.vc * v.vc;
        r.vb = u.vb * v.vb;
        r.row.resize(m_);
        for (int j = 0; j < m_; ++j) r.row[j] = u.row[j] * v.vb + u.vc * v.row[j];
        return r;
    }

    // S_q = (S_u - q(center) S_v) / v(box)  with q = u/v
    Node1 quotient(const Node1& u, const Node1& v) {
        Node1 r;
        r.vc = u.vc / v.vc;
        r.vb = u.vb / v.vb;
        r.row.resize(m_);
        for (int j = 0; j < m_; ++j) r.row[j] = (u.row[j] - r.vc * v.row[j]) / v.vb;
        return r;
    }

    int n_, m_;
    const Box &xc_, &sc_, &xb_, &sb_;
    std::unordered_map<const Expr*, Node1> memo_;
};

// -------------------------------------------------------------------------
// Second order
// -------------------------------------------------------------------------

struct Node2 {
    Interval v1{0.0}, v2{0.0}, vb{0.0};
    std::vector<Interval> s12;  // S[c1,c2]
    std::vector<Interval> s2b;  // S[c2,box]
    std::vector<Interval> t;    // m x m slab, row-major
};

class SecondOrder {
  public:
    SecondOrder(int n, int p, const Box& xc1, const Box& sc1, const Box& xc2, const Box& sc2,
                const Box& xb, const Box& sb)
        : n_(n), m_(n + p), xc1_(xc1), sc1_(sc1), xc2_(xc2), sc2_(sc2), xb_(xb), sb_(sb) {
        detail::require(xc1.dim() == n && xc2.dim() == n && xb.dim() == n,
                        "slope: state box dimension mismatch");
        detail::require(sc1.dim() == p && sc2.dim() == p && sb.dim() == p,
                        "slope: parameter box dimension mismatch");
    }

    const Node2& eval(const ExprPtr& e) {
        auto it = memo_.find(e.get());
        if (it != memo_.end()) return it->second;
        Node2 node = compute(e);
        return memo_.emplace(e.get(), std::move(node)).first->second;
    }

  private:
    Node2 zero_node() const {
        Node2 r;
        r.s12.assign(m_, Interval(0.0));
        r.s2b.assign(m_, Interval(0.0));
        r.t.assign(size_t(m_) * m_, Interval(0.0));
        return r;
    }

    Node2 compute(const ExprPtr& e) {
        switch (e->kind) {
            case Expr::Kind::Constant: {
                Node2 r = zero_node();
                r.v1 = r.v2 = r.vb = e->value;
                return r;
            }
            case Expr::Kind::Variable: {
                Node2 r = zero_node();
                bool st = e->var_class == VarClass::state;
                int col = st ? e->index : n_ + e->index;
                r.v1 = st ? xc1_[e->index] : sc1_[e->index];
                r.v2 = st ? xc2_[e->index] : sc2_[e->index];
                r.vb = st ? xb_[e->index] : sb_[e->index];
                r.s12[col] = Interval(1.0);
                r.s2b[col] = Interval(1.0);
                return r;
            }
            case Expr::Kind::Neg: {
                const Node2& u = eval(e->a);
                Node2 r = zero_node();
                r.v1 = -u.v1;
                r.v2 = -u.v2;
                r.vb = -u.vb;
                for (int j = 0; j < m_; ++j) {
                    r.s12[j] = -u.s12[j];
                    r.s2b[j] = -u.s2b[j];
                }
                for (size_t i = 0; i < r.t.size(); ++i) r.t[i] = -u.t[i];
                return r;
            }
            case Expr::Kind::Add:
            case Expr::Kind::Sub: {
                const Node2& u = eval(e->a);
                const Node2& v = eval(e->b);
                bool add = e->kind == Expr::Kind::Add;
                Node2 r = zero_node();
                r.v1 = add ? u.v1 + v.v1 : u.v1 - v.v1;
                r.v2 = add ? u.v2 + v.v2 : u.v2 - v.v2;
                r.vb = add ? u.vb + v.vb : u.vb - v.vb;
                for (int j = 0; j < m_; ++j) {
                    r.s12[j] = add ? u.s12[j] + v.s12[j] : u.s12[j] - v.s12[j];
                    r.s2b[j] = add ? u.s2b[j] + v.s2b[j] : u.s2b[j] - v.s2b[j];
                }
                for (size_t i = 0; i < r.t.size(); ++i)
                    r.t[i] = add ? u.t[i] + v.t[i] : u.t[i] - v.t[i];
                return r;
            }
            case Expr::Kind::Mul: return product(eval(e->a), eval(e->b));
            case Expr::Kind::Div: return quotient(eval(e->a), eval(e->b));
            case Expr::Kind::Pow: {
                const Node2 u = eval(e->a);
                Node2 acc = u;
                for (int i = 1; i < e->exponent; ++i) acc = product(acc, u);
                acc.v1 = intersect(acc.v1, pow_int(u.v1, e->exponent));
                acc.v2 = intersect(acc.v2, pow_int(u.v2, e->exponent));
                acc.vb = intersect(acc.vb, pow_int(u.vb, e->exponent));
                return acc;
            }
        }
        throw Error("unreachable expression kind");
    }

    // T_uv[j,k] = T_u[j,k] v(box) + S_u[c1,c2]_j S_v[c2,box]_k + u(c1) T_v[j,k]
    Node2 product(const Node2& u, const Node2& v) {
        Node2 r = zero_node();
        r.v1 = u.v1 * v.v1;
        r.v2 = u.v2 * v.v2;
        r.vb = u.vb * v.vb;
        for (int j = 0; j < m_; ++j) {
            r.s12[j] = u.s12[j] * v.v2 + u.v1 * v.s12[j];
            r.s2b[j] = u.s2b[j] * v.vb + u.v2 * v.s2b[j];
        }
        for (int j = 0; j < m_; ++j)
            for (int k = 0; k < m_; ++k) {
                size_t idx = size_t(j) * m_ + k;
                r.t[idx] = u.t[idx] * v.vb + u.s12[j] * v.s2b[k] + u.v1 * v.t[idx];
            }
        return r;
    }

    // Inverts the product rule for u = q v.
    Node2 quotient(const Node2& u, const Node2& v) {
        Node2 r = zero_node();
        r.v1 = u.v1 / v.v1;
        r.v2 = u.v2 / v.v2;
        r.vb = u.vb / v.vb;
        for (int j = 0; j < m_; ++j) {
            r.s12[j] = (u.s12[j] - r.v1 * v.s12[j]) / v.v2;
            r.s2b[j] = (u.s2b[j] - r.v2 * v.s2b[j]) / v.vb;
        }
        for (int j = 0; j < m_; ++j)
            for (int k = 0; k < m_; ++k) {
                size_t idx = size_t(j) * m_ + k;
                r.t[idx] = (u.t[idx] - r.s12[j] * v.s2b[k] - r.v1 * v.t[idx]) / v.vb;
            }
        return r;
    }

    int n_, m_;
    const Box &xc1_, &sc1_, &xc2_, &sc2_, &xb_, &sb_;
    std::unordered_map<const Expr*, Node2> memo_;
};

}  // namespace

SlopeEval slope_first(const System& sys, const Box& x_center, const Box& s_center,
                      const Box& x_box, const Box& s_box) {
    FirstOrder fo(sys.n, sys.p, x_center, s_center, x_box, s_box);
    SlopeEval out;
    out.value_center = Box(sys.n);
    out.value_box = Box(sys.n);
    out.slope = IntervalMatrix(sys.n, sys.n + sys.p);
    for (int i = 0; i < sys.n; ++i) {
        const Node1& node = fo.eval(sys.equations[i]);
        out.value_center[i] = node.vc;
        out.value_box[i] = node.vb;
        for (int j = 0; j < sys.n + sys.p; ++j) out.slope.at(i, j) = node.row[j];
    }
    return out;
}

ScalarSlope slope_first_expr(const ExprPtr& e, int n, int p, const Box& x_center,
                             const Box& s_center, const Box& x_box, const Box& s_box) {
    FirstOrder fo(n, p, x_center, s_center, x_box, s_box);
    const Node1& node = fo.eval(e);
    return ScalarSlope{node.vc, node.vb, node.row};
}

SecondSlopeEval slope_second(const System& sys, const Box& x_c1, const Box& s_c1,
                             const Box& x_c2, const Box& s_c2, const Box& x_box,
                             const Box& s_box) {
    SecondOrder so(sys.n, sys.p, x_c1, s_c1, x_c2, s_c2, x_box, s_box);
    int m = sys.n + sys.p;
    SecondSlopeEval out;
    out.value_center1 = Box(sys.n);
    out.value_center2 = Box(sys.n);
    out.value_box = Box(sys.n);
    out.slope_c1_c2 = IntervalMatrix(sys.n, m);
    out.slope_c2_box = IntervalMatrix(sys.n, m);
    out.second = IntervalTensor3(sys.n, m, m);
    for (int i = 0; i < sys.n; ++i) {
        const Node2& node = so.eval(sys.equations[i]);
        out.value_center1[i] = node.v1;
        out.value_center2[i] = node.v2;
        out.value_box[i] = node.vb;
        for (int j = 0; j < m; ++j) {
            out.slope_c1_c2.at(i, j) = node.s12[j];
            out.slope_c2_box.at(i, j) = node.s2b[j];
            for (int k = 0; k < m; ++k) out.second.at(i, j, k) = node.t[size_t(j) * m + k];
        }
    }
    return out;
}

IntervalTensor3 jacobian_slope(const System& sys, const Box& x_center, const Box& s_center,
                               const Box& x_box, const Box& s_box) {
    int m = sys.n + sys.p;
    IntervalTensor3 out(sys.n, sys.n, m);
    FirstOrder fo(sys.n, sys.p, x_center, s_center, x_box, s_box);
    for (int i = 0; i < sys.n; ++i)
        for (int j = 0; j < sys.n; ++j) {
            ScalarSlope s = slope_first_expr(sys.jac_x[i][j], sys.n, sys.p, x_center, s_center,
                                             x_box, s_box);
            for (int k = 0; k < m; ++k) out.at(i, j, k) = s.row[k];
        }
    return out;
}

GSlope make_gslope(const RealMatrix& theta) {
    GSlope g;
    g.theta = to_intervals(theta);
    g.full = IntervalMatrix(theta.rows + theta.cols, theta.cols);
    for (int i = 0; i < theta.rows; ++i)
        for (int j = 0; j < theta.cols; ++j) g.full.at(i, j) = Interval(theta.at(i, j));
    for (int j = 0; j < theta.cols; ++j) g.full.at(theta.rows + j, j) = Interval(1.0);
    return g;
}

IntervalMatrix chain_slope(const IntervalMatrix& outer, const GSlope& g) {
    return outer * g.full;
}

IntervalMatrix state_columns(const IntervalMatrix& slope, int n) {
    detail::require(n <= slope.cols, "state column selection: dimension mismatch");
    IntervalMatrix r(slope.rows, n);
    for (int i = 0; i < slope.rows; ++i)
        for (int j = 0; j < n; ++j) r.at(i, j) = slope.at(i, j);
    return r;
}

IntervalTensor3 state_slab(const IntervalTensor3& t, int n) {
    detail::require(n <= t.d2 && n <= t.d3, "state slab selection: dimension mismatch");
    IntervalTensor3 r(t.d1, n, n);
    for (int i = 0; i < t.d1; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) r.at(i, j, k) = t.at(i, j, k);
    return r;
}

}  // namespace paramex
