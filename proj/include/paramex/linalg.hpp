#pragma once

// Interval vectors (boxes), matrices and order-3 tensors, plus the point
// (double) counterparts used for preconditioners and approximate solutions.
//
// Tensor products follow the index conventions
//   (T v)_{ij}  = sum_k T_{ijk} v_k
//   (C T)_{ijk} = sum_l C_{il} T_{ljk}
//   (T B)_{ijk} = sum_l T_{ijl} B_{lk}
//   (v' T v)_i  = sum_{j,k} v_k T_{ijk} v_j

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "paramex/interval.hpp"

namespace paramex {

using RealVector = std::vector<double>;

struct RealMatrix {
    int rows = 0, cols = 0;
    std::vector<double> e;

    RealMatrix() = default;
    RealMatrix(int r, int c, double fill = 0.0) : rows(r), cols(c), e(size_t(r) * c, fill) {}

    double& at(int i, int j) { return e[size_t(i) * cols + j]; }
    double at(int i, int j) const { return e[size_t(i) * cols + j]; }

    static RealMatrix identity(int n) {
        RealMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

struct RealTensor3 {
    int d1 = 0, d2 = 0, d3 = 0;
    std::vector<double> e;

    RealTensor3() = default;
    RealTensor3(int a, int b, int c, double fill = 0.0)
        : d1(a), d2(b), d3(c), e(size_t(a) * b * c, fill) {}

    double& at(int i, int j, int k) { return e[(size_t(i) * d2 + j) * d3 + k]; }
    double at(int i, int j, int k) const { return e[(size_t(i) * d2 + j) * d3 + k]; }
};

class Box {
  public:
    Box() = default;
    explicit Box(int dim) : comps_(dim) {}
    Box(std::initializer_list<Interval> init) : comps_(init) {}
    explicit Box(std::vector<Interval> comps) : comps_(std::move(comps)) {}
    explicit Box(const RealVector& point) {
        comps_.reserve(point.size());
        for (double v : point) comps_.emplace_back(v);
    }

    int dim() const { return int(comps_.size()); }
    Interval& operator[](int i) { return comps_[i]; }
    const Interval& operator[](int i) const { return comps_[i]; }

    bool operator==(const Box& o) const { return comps_ == o.comps_; }

    auto begin() { return comps_.begin(); }
    auto end() { return comps_.end(); }
    auto begin() const { return comps_.begin(); }
    auto end() const { return comps_.end(); }

  private:
    std::vector<Interval> comps_;
};

struct IntervalMatrix {
    int rows = 0, cols = 0;
    std::vector<Interval> e;

    IntervalMatrix() = default;
    IntervalMatrix(int r, int c, Interval fill = Interval(0.0))
        : rows(r), cols(c), e(size_t(r) * c, fill) {}
    explicit IntervalMatrix(const RealMatrix& m) : rows(m.rows), cols(m.cols) {
        e.reserve(m.e.size());
        for (double v : m.e) e.emplace_back(v);
    }

    Interval& at(int i, int j) { return e[size_t(i) * cols + j]; }
    const Interval& at(int i, int j) const { return e[size_t(i) * cols + j]; }

    static IntervalMatrix identity(int n) {
        IntervalMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = Interval(1.0);
        return m;
    }
};

struct IntervalTensor3 {
    int d1 = 0, d2 = 0, d3 = 0;
    std::vector<Interval> e;

    IntervalTensor3() = default;
    IntervalTensor3(int a, int b, int c, Interval fill = Interval(0.0))
        : d1(a), d2(b), d3(c), e(size_t(a) * b * c, fill) {}
    explicit IntervalTensor3(const RealTensor3& t) : d1(t.d1), d2(t.d2), d3(t.d3) {
        e.reserve(t.e.size());
        for (double v : t.e) e.emplace_back(v);
    }

    Interval& at(int i, int j, int k) { return e[(size_t(i) * d2 + j) * d3 + k]; }
    const Interval& at(int i, int j, int k) const { return e[(size_t(i) * d2 + j) * d3 + k]; }
};

namespace detail {
inline void require(bool cond, const char* what) {
    if (!cond) throw ShapeError(what);
}
}  // namespace detail

inline RealVector midpoint(const Box& b) {
    RealVector m(b.dim());
    for (int i = 0; i < b.dim(); ++i) m[i] = midpoint(b[i]);
    return m;
}

inline Box operator+(const Box& a, const Box& b) {
    detail::require(a.dim() == b.dim(), "box addition: dimension mismatch");
    Box r(a.dim());
    for (int i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Box operator-(const Box& a, const Box& b) {
    detail::require(a.dim() == b.dim(), "box subtraction: dimension mismatch");
    Box r(a.dim());
    for (int i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Box hull(const Box& a, const Box& b) {
    detail::require(a.dim() == b.dim(), "box hull: dimension mismatch");
    Box r(a.dim());
    for (int i = 0; i < a.dim(); ++i) r[i] = hull(a[i], b[i]);
    return r;
}

// Componentwise intersection; empty in any component makes the whole box empty there.
inline Box intersect(const Box& a, const Box& b) {
    detail::require(a.dim() == b.dim(), "box intersection: dimension mismatch");
    Box r(a.dim());
    for (int i = 0; i < a.dim(); ++i) r[i] = intersect(a[i], b[i]);
    return r;
}

inline bool contains(const Box& outer, const Box& inner) {
    detail::require(outer.dim() == inner.dim(), "box containment: dimension mismatch");
    for (int i = 0; i < outer.dim(); ++i)
        if (!contains(outer[i], inner[i])) return false;
    return true;
}

inline bool contains(const Box& outer, const RealVector& point) {
    detail::require(outer.dim() == int(point.size()), "box containment: dimension mismatch");
    for (int i = 0; i < outer.dim(); ++i)
        if (!contains(outer[i], point[i])) return false;
    return true;
}

inline bool in_interior(const Box& outer, const Box& inner) {
    detail::require(outer.dim() == inner.dim(), "box interior test: dimension mismatch");
    for (int i = 0; i < outer.dim(); ++i)
        if (!in_interior(outer[i], inner[i])) return false;
    return true;
}

inline bool in_interior(const Box& outer, const RealVector& point) {
    detail::require(outer.dim() == int(point.size()), "box interior test: dimension mismatch");
    for (int i = 0; i < outer.dim(); ++i)
        if (!(outer[i].lo() < point[i] && point[i] < outer[i].hi())) return false;
    return true;
}

inline bool is_empty(const Box& b) {
    for (int i = 0; i < b.dim(); ++i)
        if (b[i].is_empty()) return true;
    return b.dim() == 0;
}

// Componentwise upper bounds on absolute values.
inline RealVector absv(const Box& b) {
    RealVector r(b.dim());
    for (int i = 0; i < b.dim(); ++i) r[i] = mag(b[i]);
    return r;
}

inline RealMatrix absv(const IntervalMatrix& m) {
    RealMatrix r(m.rows, m.cols);
    for (size_t i = 0; i < m.e.size(); ++i) r.e[i] = mag(m.e[i]);
    return r;
}

inline RealTensor3 absv(const IntervalTensor3& t) {
    RealTensor3 r(t.d1, t.d2, t.d3);
    for (size_t i = 0; i < t.e.size(); ++i) r.e[i] = mag(t.e[i]);
    return r;
}

inline IntervalMatrix operator*(const IntervalMatrix& a, const IntervalMatrix& b) {
    detail::require(a.cols == b.rows, "matrix product: dimension mismatch");
    IntervalMatrix r(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < b.cols; ++j) {
            Interval s(0.0);
            for (int k = 0; k < a.cols; ++k) s = s + a.at(i, k) * b.at(k, j);
            r.at(i, j) = s;
        }
    return r;
}

inline Box operator*(const IntervalMatrix& a, const Box& v) {
    detail::require(a.cols == v.dim(), "matrix-vector product: dimension mismatch");
    Box r(a.rows);
    for (int i = 0; i < a.rows; ++i) {
        Interval s(0.0);
        for (int k = 0; k < a.cols; ++k) s = s + a.at(i, k) * v[k];
        r[i] = s;
    }
    return r;
}

inline IntervalMatrix operator+(const IntervalMatrix& a, const IntervalMatrix& b) {
    detail::require(a.rows == b.rows && a.cols == b.cols, "matrix sum: dimension mismatch");
    IntervalMatrix r(a.rows, a.cols);
    for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = a.e[i] + b.e[i];
    return r;
}

inline IntervalMatrix operator-(const IntervalMatrix& a, const IntervalMatrix& b) {
    detail::require(a.rows == b.rows && a.cols == b.cols, "matrix difference: dimension mismatch");
    IntervalMatrix r(a.rows, a.cols);
    for (size_t i = 0; i < a.e.size(); ++i) r.e[i] = a.e[i] - b.e[i];
    return r;
}

// (T v)_{ij} = sum_k T_{ijk} v_k
inline IntervalMatrix tensor_vec(const IntervalTensor3& t, const Box& v) {
    detail::require(t.d3 == v.dim(), "tensor-vector product: dimension mismatch");
    IntervalMatrix r(t.d1, t.d2);
    for (int i = 0; i < t.d1; ++i)
        for (int j = 0; j < t.d2; ++j) {
            Interval s(0.0);
            for (int k = 0; k < t.d3; ++k) s = s + t.at(i, j, k) * v[k];
            r.at(i, j) = s;
        }
    return r;
}

// (C T)_{ijk} = sum_l C_{il} T_{ljk}
inline IntervalTensor3 mat_tensor(const IntervalMatrix& c, const IntervalTensor3& t) {
    detail::require(c.cols == t.d1, "matrix-tensor product: dimension mismatch");
    IntervalTensor3 r(c.rows, t.d2, t.d3);
    for (int i = 0; i < c.rows; ++i)
        for (int j = 0; j < t.d2; ++j)
            for (int k = 0; k < t.d3; ++k) {
                Interval s(0.0);
                for (int l = 0; l < t.d1; ++l) s = s + c.at(i, l) * t.at(l, j, k);
                r.at(i, j, k) = s;
            }
    return r;
}

// (T B)_{ijk} = sum_l T_{ijl} B_{lk}
inline IntervalTensor3 tensor_mat(const IntervalTensor3& t, const IntervalMatrix& b) {
    detail::require(t.d3 == b.rows, "tensor-matrix product: dimension mismatch");
    IntervalTensor3 r(t.d1, t.d2, b.cols);
    for (int i = 0; i < t.d1; ++i)
        for (int j = 0; j < t.d2; ++j)
            for (int k = 0; k < b.cols; ++k) {
                Interval s(0.0);
                for (int l = 0; l < t.d3; ++l) s = s + t.at(i, j, l) * b.at(l, k);
                r.at(i, j, k) = s;
            }
    return r;
}

// (v' T v)_i = sum_{j,k} v_k T_{ijk} v_j
inline Box quad_form(const Box& v, const IntervalTensor3& t, const Box& w) {
    detail::require(t.d2 == w.dim() && t.d3 == v.dim() && t.d1 > 0,
                    "quadratic form: dimension mismatch");
    Box r(t.d1);
    for (int i = 0; i < t.d1; ++i) {
        Interval s(0.0);
        for (int j = 0; j < t.d2; ++j)
            for (int k = 0; k < t.d3; ++k) s = s + v[k] * t.at(i, j, k) * w[j];
        r[i] = s;
    }
    return r;
}

inline Box quad_form(const RealVector& v, const IntervalTensor3& t, const RealVector& w) {
    return quad_form(Box(v), t, Box(w));
}

inline IntervalMatrix to_intervals(const RealMatrix& m) { return IntervalMatrix(m); }
inline IntervalTensor3 to_intervals(const RealTensor3& t) { return IntervalTensor3(t); }

}  // namespace paramex
