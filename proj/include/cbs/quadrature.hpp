#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "cbs/types.hpp"

namespace cbs {

struct QuadOptions {
    double rel_tol = 1e-7;
    double abs_tol = 0.0;
    int max_evals = 200000;
};

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;
    int evals = 0;
    bool converged = true;
};

namespace detail {

inline constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                   0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                   0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                   0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                   0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                   0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                   0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(cplx x) { return std::abs(x); }

}  // namespace detail

// Adaptive Gauss-Kronrod (7/15) over the real line, split at the given
// breakpoints. Segments beyond the outermost breakpoints are mapped to
// finite intervals with x = a +- (1 - t)/t.
template <class T>
QuadResult<T> integrate_line(const std::function<T(double)>& f, std::vector<double> breaks, const QuadOptions& opt,
                             bool left_tail = true, bool right_tail = true) {
    struct Seg {
        double a, b;
        int map;  // 0 finite, -1 left tail, +1 right tail
        double anchor;
        T val;
        double err;
        bool operator<(const Seg& o) const { return err < o.err; }
    };
    QuadResult<T> res;
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    if (breaks.empty()) breaks.push_back(0.0);

    auto eval = [&](double t, int map, double anchor, double& jac) -> double {
        if (map == 0) {
            jac = 1.0;
            return t;
        }
        jac = 1.0 / (t * t);
        return map > 0 ? anchor + (1.0 - t) / t : anchor - (1.0 - t) / t;
    };

    auto gk = [&](Seg& s) {
        const double c = 0.5 * (s.a + s.b), h = 0.5 * (s.b - s.a);
        T kron{}, gauss{};
        double jac;
        const double xc = eval(c, s.map, s.anchor, jac);
        const T fc = f(xc) * jac;
        kron = fc * detail::kWgk[7];
        gauss = fc * detail::kWg[3];
        for (int j = 0; j < 7; ++j) {
            double j1, j2;
            const double x1 = eval(c - h * detail::kXgk[j], s.map, s.anchor, j1);
            const double x2 = eval(c + h * detail::kXgk[j], s.map, s.anchor, j2);
            const T y = f(x1) * j1 + f(x2) * j2;
            kron += y * detail::kWgk[j];
            if (j % 2 == 1) gauss += y * detail::kWg[j / 2];
        }
        res.evals += 15;
        s.val = kron * h;
        s.err = detail::magnitude((kron - gauss) * h);
    };

    std::priority_queue<Seg> heap;
    auto push = [&](Seg s) {
        gk(s);
        heap.push(s);
    };
    if (left_tail) push(Seg{0.0, 1.0, -1, breaks.front(), T{}, 0.0});
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) push(Seg{breaks[i], breaks[i + 1], 0, 0.0, T{}, 0.0});
    if (right_tail) push(Seg{0.0, 1.0, 1, breaks.back(), T{}, 0.0});

    auto totals = [&]() {
        T v{};
        double e = 0.0;
        auto copy = heap;
        while (!copy.empty()) {
            v += copy.top().val;
            e += copy.top().err;
            copy.pop();
        }
        return std::make_pair(v, e);
    };

    T total{};
    double err = 0.0;
    {
        auto [v, e] = totals();
        total = v;
        err = e;
    }
    while (err > std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total))) {
        if (res.evals + 30 > opt.max_evals || heap.empty()) {
            res.converged = false;
            break;
        }
        Seg s = heap.top();
        heap.pop();
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b)) {
            res.converged = false;
            heap.push(s);
            break;
        }
        Seg l{s.a, mid, s.map, s.anchor, T{}, 0.0}, r{mid, s.b, s.map, s.anchor, T{}, 0.0};
        gk(l);
        gk(r);
        total += l.val + r.val - s.val;
        err += l.err + r.err - s.err;
        heap.push(l);
        heap.push(r);
        // Running sums drift; recompute occasionally.
        if (res.evals % 3000 < 30) {
            auto [v, e] = totals();
            total = v;
            err = e;
        }
    }
    auto [v, e] = totals();
    res.value = v;
    res.error = e;
    return res;
}

}  // namespace cbs
