#include "delaystep/exp_poly.hpp"

#include "delaystep/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace delaystep {

namespace {

template <class T>
const std::array<T, max_factorial + 1>& factorial_table() {
    static const auto table = [] {
        std::array<T, max_factorial + 1> t{};
        t[0] = 1;
        for (int n = 1; n <= max_factorial; ++n) {
            t[static_cast<std::size_t>(n)] = t[static_cast<std::size_t>(n) - 1] * n;
        }
        return t;
    }();
    return table;
}

void check_factorial(int n) {
    if (n < 0 || n > max_factorial) {
        throw UnsupportedDegree("factorial argument " + std::to_string(n) +
                                " outside supported range [0, 170]");
    }
}

const real& real_factorial(int n) {
    check_factorial(n);
    return factorial_table<real>()[static_cast<std::size_t>(n)];
}

real real_binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    return boost::multiprecision::round(real_factorial(n) / (real_factorial(k) * real_factorial(n - k)));
}

template <class T>
T power(T base, int exp) {
    T result = 1;
    while (exp > 0) {
        if (exp & 1) {
            result *= base;
        }
        base *= base;
        exp >>= 1;
    }
    return result;
}

real horner(const std::vector<real>& c, const real& t) {
    real acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * t + *it;
    }
    return acc;
}

void trim(std::vector<real>& c) {
    while (!c.empty() && c.back() == 0) {
        c.pop_back();
    }
}

}  // namespace

double factorial(int n) {
    check_factorial(n);
    return factorial_table<double>()[static_cast<std::size_t>(n)];
}

double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    return std::round(factorial(n) / (factorial(k) * factorial(n - k)));
}

double ipow(double base, int exp) noexcept { return power(base, exp); }

real derivative_coefficient(int h, int i, int j, const real& r) {
    if (j < 0 || j > i || h - i + j < 0) {
        return 0;
    }
    const int d = i - j;
    // binom(i, d) * h! / (h - d)!, kept as two moderate ratios
    const real ratio_i = real_factorial(i) / (real_factorial(j) * real_factorial(d));
    const real ratio_h = real_factorial(h) / real_factorial(h - d);
    return ratio_i * ratio_h * power(r, h - d);
}

double derivative_coefficient(int h, int i, int j, double r) {
    return to_double(derivative_coefficient(h, i, j, real(r)));
}

ExpPoly::ExpPoly(std::vector<ExpTerm> terms) {
    std::stable_sort(terms.begin(), terms.end(),
                     [](const ExpTerm& a, const ExpTerm& b) { return a.root < b.root; });
    for (auto& term : terms) {
        if (!terms_.empty() && abs(term.root - terms_.back().root) <= root_distinct_tol) {
            auto& into = terms_.back().coeffs;
            if (into.size() < term.coeffs.size()) {
                into.resize(term.coeffs.size(), real(0));
            }
            for (std::size_t i = 0; i < term.coeffs.size(); ++i) {
                into[i] += term.coeffs[i];
            }
        } else {
            terms_.push_back(std::move(term));
        }
    }
    for (auto& term : terms_) {
        trim(term.coeffs);
    }
    std::erase_if(terms_, [](const ExpTerm& t) { return t.coeffs.empty(); });
}

ExpPoly ExpPoly::constant(double value) {
    return ExpPoly({ExpTerm{0.0, {value}}});
}

ExpPoly ExpPoly::term(const real& root, std::vector<real> coeffs) {
    return ExpPoly({ExpTerm{root, std::move(coeffs)}});
}

const ExpTerm* ExpPoly::find(const real& root, double tol) const {
    for (const auto& t : terms_) {
        if (abs(t.root - root) <= tol) {
            return &t;
        }
    }
    return nullptr;
}

int ExpPoly::degree(const real& root) const {
    const auto* t = find(root);
    return t ? static_cast<int>(t->coeffs.size()) - 1 : -1;
}

int ExpPoly::max_degree() const noexcept {
    int d = -1;
    for (const auto& t : terms_) {
        d = std::max(d, static_cast<int>(t.coeffs.size()) - 1);
    }
    return d;
}

std::vector<real> ExpPoly::roots() const {
    std::vector<real> r;
    r.reserve(terms_.size());
    for (const auto& t : terms_) {
        r.push_back(t.root);
    }
    return r;
}

real ExpPoly::exact(double t) const {
    const real x = t;
    real sum = 0;
    for (const auto& term : terms_) {
        const real growth = term.root == 0 ? real(1) : exp(term.root * x);
        sum += growth * horner(term.coeffs, x);
    }
    return sum;
}

double ExpPoly::operator()(double t) const { return to_double(exact(t)); }

double evaluate(const ExpPoly& f, double t) { return f(t); }

ExpPoly derivative(const ExpPoly& f, int h) {
    if (h < 1) {
        throw InvalidInput("derivative order must be at least 1, got " + std::to_string(h));
    }
    std::vector<ExpTerm> out;
    out.reserve(f.terms().size());
    for (const auto& term : f.terms()) {
        const int z = static_cast<int>(term.coeffs.size()) - 1;
        const real& r = term.root;
        ExpTerm d{term.root, std::vector<real>(term.coeffs.size(), real(0))};
        for (int j = 0; j <= z; ++j) {
            real acc = 0;
            for (int i = j; i <= std::min(z, j + h); ++i) {
                acc += term.coeffs[static_cast<std::size_t>(i)] * derivative_coefficient(h, i, j, r);
            }
            d.coeffs[static_cast<std::size_t>(j)] = acc;
        }
        out.push_back(std::move(d));
    }
    return ExpPoly(std::move(out));
}

real exact_derivative(const ExpPoly& f, int h, double t) {
    return h == 0 ? f.exact(t) : derivative(f, h).exact(t);
}

double evaluate_derivative(const ExpPoly& f, int h, double t) {
    return to_double(exact_derivative(f, h, t));
}

ExpPoly add(const ExpPoly& f, const ExpPoly& g) {
    std::vector<ExpTerm> all(f.terms());
    all.insert(all.end(), g.terms().begin(), g.terms().end());
    return ExpPoly(std::move(all));
}

ExpPoly scale(const ExpPoly& f, double s) {
    std::vector<ExpTerm> out(f.terms());
    for (auto& t : out) {
        for (auto& c : t.coeffs) {
            c *= real(s);
        }
    }
    return ExpPoly(std::move(out));
}

ExpPoly shift_origin(const ExpPoly& f, double delta) {
    std::vector<ExpTerm> out;
    out.reserve(f.terms().size());
    for (const auto& term : f.terms()) {
        const int z = static_cast<int>(term.coeffs.size()) - 1;
        const real d = delta;
        const real growth = exp(term.root * d);
        ExpTerm s{term.root, std::vector<real>(term.coeffs.size(), real(0))};
        for (int j = 0; j <= z; ++j) {
            real acc = 0;
            for (int i = j; i <= z; ++i) {
                acc += term.coeffs[static_cast<std::size_t>(i)] * real_binomial(i, j) * power(d, i - j);
            }
            s.coeffs[static_cast<std::size_t>(j)] = growth * acc;
        }
        out.push_back(std::move(s));
    }
    return ExpPoly(std::move(out));
}

real unit_moment(int j, const real& x) {
    // x >= 0: sum_k x^k / (k! (j+k+1)).
    // x < 0:  e^x/(j+1) sum_k |x|^k / ((j+2)...(j+k+1))  (Kummer transformation).
    // Both series have positive terms only.
    constexpr int max_terms = 100000;
    const real eps = std::numeric_limits<real>::epsilon();
    if (x >= 0) {
        real power_term = 1;
        real sum = real(1) / (j + 1);
        for (int k = 1; k < max_terms; ++k) {
            power_term *= x / k;
            const real term = power_term / (j + k + 1);
            sum += term;
            if (k > x && term <= eps * sum) {
                break;
            }
        }
        return sum;
    }
    const real y = -x;
    real term = 1;
    real sum = 1;
    for (int k = 1; k < max_terms; ++k) {
        term *= y / (j + 1 + k);
        sum += term;
        if (k > y && term <= eps * sum) {
            break;
        }
    }
    return exp(x) * sum / (j + 1);
}

double unit_moment(int j, double x) { return to_double(unit_moment(j, real(x))); }

double definite_integral(const ExpPoly& f, double a, double b) {
    if (b < a) {
        return -definite_integral(f, b, a);
    }
    const double length = b - a;
    if (length == 0.0) {
        return 0.0;
    }
    // Re-origin at a, then integrate e^{r u} u^j over [0, length] term by term.
    const ExpPoly local = shift_origin(f, a);
    const real len = length;
    real total = 0;
    for (const auto& term : local.terms()) {
        const real x = term.root * len;
        real length_power = len;
        for (std::size_t j = 0; j < term.coeffs.size(); ++j) {
            total += term.coeffs[j] * length_power * unit_moment(static_cast<int>(j), x);
            length_power *= len;
        }
    }
    return to_double(total);
}

bool approx_equal(const ExpPoly& f, const ExpPoly& g, double tol) {
    real magnitude = 1;
    for (const auto* p : {&f, &g}) {
        for (const auto& t : p->terms()) {
            for (const auto& c : t.coeffs) {
                magnitude = std::max(magnitude, real(abs(c)));
            }
        }
    }
    const auto covered = [&](const ExpPoly& x, const ExpPoly& y) {
        for (const auto& tx : x.terms()) {
            const auto* ty = y.find(tx.root);
            const std::size_t n = std::max(tx.coeffs.size(), ty ? ty->coeffs.size() : 0);
            for (std::size_t i = 0; i < n; ++i) {
                const real cx = i < tx.coeffs.size() ? tx.coeffs[i] : real(0);
                const real cy = ty && i < ty->coeffs.size() ? ty->coeffs[i] : real(0);
                if (abs(cx - cy) > tol * magnitude) {
                    return false;
                }
            }
        }
        return true;
    };
    return covered(f, g) && covered(g, f);
}

ExpPoly snap_roots(const ExpPoly& f, std::span<const real> roots) {
    std::vector<ExpTerm> out;
    out.reserve(f.terms().size());
    for (const auto& t : f.terms()) {
        const auto match = std::find_if(roots.begin(), roots.end(), [&](const real& r) {
            return abs(r - t.root) <= root_distinct_tol;
        });
        if (match == roots.end()) {
            throw InvalidInput("exponential rate " + std::to_string(to_double(t.root)) +
                               " is not a characteristic root of the system");
        }
        out.push_back(ExpTerm{*match, t.coeffs});
    }
    return ExpPoly(std::move(out));
}

}  // namespace delaystep
