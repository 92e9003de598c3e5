#include "ibt/matrix.hpp"

#include <algorithm>

namespace ibt {

Mat Mat::identity(const Ctx& c, long n) {
    Mat m(c, n, n);
    for (long i = 0; i < n; ++i) m.at(i, i) = FieldElement::one(c);
    return m;
}

Mat Mat::frobenius(long k) const {
    Mat m = *this;
    for (auto& x : m.e_) x = x.frobenius(k);
    return m;
}

Mat Mat::transpose() const {
    Mat m(ctx_, cols_, rows_);
    for (long i = 0; i < rows_; ++i)
        for (long j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
    return m;
}

std::vector<FieldElement> Mat::col(long j) const {
    std::vector<FieldElement> v((size_t)rows_);
    for (long i = 0; i < rows_; ++i) v[(size_t)i] = at(i, j);
    return v;
}

std::vector<FieldElement> Mat::row(long i) const {
    std::vector<FieldElement> v((size_t)cols_);
    for (long j = 0; j < cols_; ++j) v[(size_t)j] = at(i, j);
    return v;
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw InvalidParams("matrix dimension mismatch in product");
    Ctx c = a.ctx()->same_as(*b.ctx()) ? a.ctx() : join_context(a.ctx(), b.ctx());
    Mat r(c, a.rows(), b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long k = 0; k < a.cols(); ++k) {
            const FieldElement& aik = a.at(i, k);
            if (aik.is_exact_zero()) continue;
            for (long j = 0; j < b.cols(); ++j) {
                if (b.at(k, j).is_exact_zero()) continue;
                r.at(i, j) = r.at(i, j) + aik * b.at(k, j);
            }
        }
    return r;
}

Mat operator+(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidParams("matrix dimension mismatch in sum");
    Ctx c = a.ctx()->same_as(*b.ctx()) ? a.ctx() : join_context(a.ctx(), b.ctx());
    Mat r(c, a.rows(), a.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j) + b.at(i, j);
    return r;
}

Mat operator-(const Mat& a, const Mat& b) { return a + mat_scale(b, -FieldElement::one(b.ctx())); }

Mat mat_scale(const Mat& a, const FieldElement& c) {
    Mat r = a;
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j) r.at(i, j) = r.at(i, j) * c;
    return r;
}

std::vector<FieldElement> mat_apply(const Mat& a, const std::vector<FieldElement>& x) {
    if ((long)x.size() != a.cols()) throw InvalidParams("vector length mismatch");
    std::vector<FieldElement> r((size_t)a.rows(), FieldElement::zero(a.ctx()));
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j)
            if (!a.at(i, j).is_exact_zero() && !x[(size_t)j].is_exact_zero())
                r[(size_t)i] = r[(size_t)i] + a.at(i, j) * x[(size_t)j];
    return r;
}

Mat mat_coerce(const Mat& a, const Ctx& dst) {
    if (a.ctx()->same_as(*dst)) return a;
    Mat r(dst, a.rows(), a.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j) r.at(i, j) = coerce(a.at(i, j), dst);
    return r;
}

bool mat_equal_at_precision(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j)
            if (!equal_at_precision(a.at(i, j), b.at(i, j))) return false;
    return true;
}

bool mat_is_integral(const Mat& a) {
    bool undecided = false;
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j) {
            auto vi = a.at(i, j).val_info();
            if (vi.kind == ValInfo::Infinite) continue;
            if (vi.kind == ValInfo::Exact) {
                if (vi.v < 0) return false;
            } else if (vi.v < 0) {
                undecided = true;
            }
        }
    if (undecided)
        throw PrecisionExhausted("an entry vanishes at precision but its certified bound is negative; "
                                 "integrality undecidable at this precision");
    return true;
}

Poly charpoly(const Mat& a) {
    if (a.rows() != a.cols()) throw InvalidParams("characteristic polynomial of a non-square matrix");
    const Ctx& c = a.ctx();
    long n = a.rows();
    Poly q = {FieldElement::one(c)};
    for (long i = 0; i < n; ++i) {
        // border the leading i x i block with row i / column i of a
        // w_k = M^k S, v_k = R.w_k with M the block, R the row, S the column
        std::vector<std::vector<FieldElement>> w;
        std::vector<FieldElement> v;
        if (i > 0) {
            std::vector<FieldElement> cur((size_t)i);
            for (long r = 0; r < i; ++r) cur[(size_t)r] = a.at(r, i);
            for (long k = 0; k < i; ++k) {
                if (k > 0) {
                    std::vector<FieldElement> nxt((size_t)i, FieldElement::zero(c));
                    for (long r = 0; r < i; ++r)
                        for (long t = 0; t < i; ++t)
                            if (!a.at(r, t).is_exact_zero())
                                nxt[(size_t)r] = nxt[(size_t)r] + a.at(r, t) * cur[(size_t)t];
                    cur = std::move(nxt);
                }
                FieldElement dot = FieldElement::zero(c);
                for (long t = 0; t < i; ++t) dot = dot + a.at(i, t) * cur[(size_t)t];
                v.push_back(dot);
            }
        }
        // p(x) = (x - a_ii) q(x) - sum_j x^j sum_{l>j} q_l v_{l-1-j}
        Poly next((size_t)(i + 2), FieldElement::zero(c));
        for (long l = 0; l <= i; ++l) {
            next[(size_t)(l + 1)] = next[(size_t)(l + 1)] + q[(size_t)l];
            next[(size_t)l] = next[(size_t)l] - a.at(i, i) * q[(size_t)l];
        }
        for (long j = 0; j < i; ++j) {
            FieldElement s = FieldElement::zero(c);
            for (long l = j + 1; l <= i; ++l) s = s + q[(size_t)l] * v[(size_t)(l - 1 - j)];
            next[(size_t)j] = next[(size_t)j] - s;
        }
        q = std::move(next);
    }
    return q;
}

FieldElement det(const Mat& a) {
    Poly q = charpoly(a);
    FieldElement c0 = q[0];
    return (a.rows() % 2) ? -c0 : c0;
}

namespace {

// smallest-valuation regular entry in the window rows>=r0, cols>=c0 with
// row-major tie-breaking; returns false when none is regular
bool find_pivot(const Mat& d, long r0, long c0, long& pi, long& pj) {
    bool found = false;
    long best = 0;
    for (long i = r0; i < d.rows(); ++i)
        for (long j = c0; j < d.cols(); ++j) {
            const auto& x = d.at(i, j);
            if (x.state() != ElemState::Regular) continue;
            if (!found || x.pi_valuation() < best) {
                found = true;
                best = x.pi_valuation();
                pi = i;
                pj = j;
            }
        }
    return found;
}

void check_window_zero(const Mat& d, long r0, long c0, const char* what) {
    for (long i = r0; i < d.rows(); ++i)
        for (long j = c0; j < d.cols(); ++j)
            if (d.at(i, j).state() == ElemState::NearZero)
                throw PrecisionExhausted(std::string(what) +
                                         ": remaining entries vanish at working precision but are not "
                                         "exact zeros; increase precision to certify the rank");
}

} // namespace

Mat inverse(const Mat& a) {
    if (a.rows() != a.cols()) throw InvalidParams("inverse of a non-square matrix");
    long n = a.rows();
    const Ctx& c = a.ctx();
    Mat d = a;
    Mat inv = Mat::identity(c, n);
    std::vector<long> colperm(n);
    for (long i = 0; i < n; ++i) colperm[(size_t)i] = i;

    for (long k = 0; k < n; ++k) {
        // pivot within rows >= k (column pivoting via permutation)
        long pi = -1, pj = -1;
        if (!find_pivot(d, k, k, pi, pj)) {
            bool all_exact = true;
            for (long i = k; i < n && all_exact; ++i)
                for (long j = k; j < n && all_exact; ++j)
                    if (!d.at(i, j).is_exact_zero()) all_exact = false;
            if (all_exact) throw DivisionByZero("matrix is singular");
            throw PrecisionExhausted("matrix cannot be certified invertible at working precision");
        }
        if (pi != k)
            for (long j = 0; j < n; ++j) {
                std::swap(d.at(pi, j), d.at(k, j));
                std::swap(inv.at(pi, j), inv.at(k, j));
            }
        if (pj != k) {
            for (long i = 0; i < n; ++i) std::swap(d.at(i, pj), d.at(i, k));
            std::swap(colperm[(size_t)pj], colperm[(size_t)k]);
        }
        FieldElement piv_inv = d.at(k, k).inv();
        for (long j = 0; j < n; ++j) {
            d.at(k, j) = d.at(k, j) * piv_inv;
            inv.at(k, j) = inv.at(k, j) * piv_inv;
        }
        for (long i = 0; i < n; ++i) {
            if (i == k || d.at(i, k).is_exact_zero()) continue;
            FieldElement f = d.at(i, k);
            if (f.is_zeroish()) continue;
            for (long j = 0; j < n; ++j) {
                d.at(i, j) = d.at(i, j) - f * d.at(k, j);
                inv.at(i, j) = inv.at(i, j) - f * inv.at(k, j);
            }
        }
    }
    // undo the column permutation: we inverted A P, so P (AP)^{-1} = A^{-1}
    Mat out(c, n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) out.at(colperm[(size_t)i], j) = inv.at(i, j);
    return out;
}

std::vector<std::vector<FieldElement>> kernel_basis(const Mat& a) {
    const Ctx& c = a.ctx();
    long r = a.rows(), n = a.cols();
    Mat d = a;
    std::vector<long> pivrow, pivcol;
    std::vector<bool> used_col((size_t)n, false);
    long k = 0;
    while (k < r) {
        long pi = -1, pj = -1;
        bool found = false;
        long best = 0;
        for (long i = k; i < r; ++i)
            for (long j = 0; j < n; ++j) {
                if (used_col[(size_t)j]) continue;
                const auto& x = d.at(i, j);
                if (x.state() != ElemState::Regular) continue;
                if (!found || x.pi_valuation() < best) {
                    found = true;
                    best = x.pi_valuation();
                    pi = i;
                    pj = j;
                }
            }
        if (!found) break;
        if (pi != k)
            for (long j = 0; j < n; ++j) std::swap(d.at(pi, j), d.at(k, j));
        FieldElement piv_inv = d.at(k, pj).inv();
        for (long i = 0; i < r; ++i) {
            if (i == k) continue;
            FieldElement f = d.at(i, pj) * piv_inv;
            if (f.is_zeroish()) continue;
            for (long j = 0; j < n; ++j) d.at(i, j) = d.at(i, j) - f * d.at(k, j);
        }
        pivrow.push_back(k);
        pivcol.push_back(pj);
        used_col[(size_t)pj] = true;
        ++k;
    }
    std::vector<std::vector<FieldElement>> basis;
    for (long f = 0; f < n; ++f) {
        if (used_col[(size_t)f]) continue;
        std::vector<FieldElement> x((size_t)n, FieldElement::zero(c));
        x[(size_t)f] = FieldElement::one(c);
        for (size_t t = 0; t < pivcol.size(); ++t) {
            FieldElement num = d.at(pivrow[t], f);
            if (num.is_exact_zero()) continue;
            x[(size_t)pivcol[t]] = -(num / d.at(pivrow[t], pivcol[t]));
        }
        basis.push_back(std::move(x));
    }
    return basis;
}

SNF smith_normal_form(const Mat& a) {
    const Ctx& c = a.ctx();
    long r = a.rows(), n = a.cols();
    SNF s;
    s.U = Mat::identity(c, r);
    s.V = Mat::identity(c, n);
    Mat d = a;
    long steps = std::min(r, n);
    for (long k = 0; k < steps; ++k) {
        long pi = -1, pj = -1;
        if (!find_pivot(d, k, k, pi, pj)) {
            check_window_zero(d, k, k, "smith normal form");
            break;
        }
        if (pi != k)
            for (long j = 0; j < n; ++j) std::swap(d.at(pi, j), d.at(k, j));
        if (pi != k)
            for (long j = 0; j < r; ++j) std::swap(s.U.at(pi, j), s.U.at(k, j));
        if (pj != k)
            for (long i = 0; i < r; ++i) std::swap(d.at(i, pj), d.at(i, k));
        if (pj != k)
            for (long i = 0; i < n; ++i) std::swap(s.V.at(i, pj), s.V.at(i, k));

        long aval = d.at(k, k).pi_valuation();
        FieldElement piv_inv = d.at(k, k).inv();
        FieldElement unit_inv = FieldElement::pi_power(c, aval) * piv_inv;
        for (long j = 0; j < n; ++j) d.at(k, j) = d.at(k, j) * unit_inv;
        for (long j = 0; j < r; ++j) s.U.at(k, j) = s.U.at(k, j) * unit_inv;

        FieldElement pk_inv = FieldElement::pi_power(c, -aval);
        for (long i = k + 1; i < r; ++i) {
            if (d.at(i, k).is_exact_zero()) continue;
            FieldElement f = d.at(i, k) * pk_inv; // entry / pi^aval, integral
            for (long j = 0; j < n; ++j) d.at(i, j) = d.at(i, j) - f * d.at(k, j);
            for (long j = 0; j < r; ++j) s.U.at(i, j) = s.U.at(i, j) - f * s.U.at(k, j);
        }
        for (long j = k + 1; j < n; ++j) {
            if (d.at(k, j).is_exact_zero()) continue;
            FieldElement f = d.at(k, j) * pk_inv;
            for (long i = 0; i < r; ++i) d.at(i, j) = d.at(i, j) - f * d.at(i, k);
            for (long i = 0; i < n; ++i) s.V.at(i, j) = s.V.at(i, j) - f * s.V.at(i, k);
        }
        s.exps.push_back(aval);
    }
    return s;
}

} // namespace ibt
