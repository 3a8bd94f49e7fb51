#include "fractal/calculus.hpp"

#include "fractal/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

namespace fractal {

GridFunction::GridFunction(TablePtr table, std::vector<double> values)
    : table_(std::move(table)), t_(table_->t), s_(table_->s), values_(std::move(values)) {
    if (values_.size() != t_.size())
        throw ParameterError("grid function needs one value per staircase breakpoint");
}

GridFunction::GridFunction(TablePtr table, std::vector<double> t, std::vector<double> values)
    : table_(std::move(table)), t_(std::move(t)), values_(std::move(values)) {
    if (values_.size() != t_.size()) throw ParameterError("sample/value size mismatch");
    s_.reserve(t_.size());
    for (std::size_t i = 0; i < t_.size(); ++i) {
        if (i > 0 && !(t_[i - 1] < t_[i])) throw ParameterError("samples must be strictly increasing");
        if (!table_->set.contains(t_[i]))
            throw ParameterError("sample t = " + std::to_string(t_[i]) + " is not a set point");
        s_.push_back(eval_staircase(*table_, t_[i]));
    }
}

GridFunction GridFunction::sample(TablePtr table, const std::function<double(double)>& f) {
    std::vector<double> v;
    v.reserve(table->t.size());
    for (double t : table->t) v.push_back(f(t));
    return GridFunction(std::move(table), std::move(v));
}

GridFunction GridFunction::of_staircase(TablePtr table, const std::function<double(double)>& phi) {
    std::vector<double> v;
    v.reserve(table->s.size());
    for (double s : table->s) v.push_back(phi(s));
    return GridFunction(std::move(table), std::move(v));
}

std::size_t GridFunction::index_of(double t) const {
    auto it = std::lower_bound(t_.begin(), t_.end(), t);
    if (it == t_.end() || *it != t) return size();
    return static_cast<std::size_t>(it - t_.begin());
}

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::size_t lower_neighbor(const std::vector<double>& s, std::size_t i) {
    for (std::size_t j = i; j-- > 0;)
        if (s[j] < s[i]) return j;
    return npos;
}

std::size_t upper_neighbor(const std::vector<double>& s, std::size_t i) {
    for (std::size_t j = i + 1; j < s.size(); ++j)
        if (s[j] > s[i]) return j;
    return npos;
}

double quotient_at(const GridFunction& f, std::size_t i) {
    const auto& s = f.s();
    const auto& v = f.values();
    const std::size_t lo = lower_neighbor(s, i);
    const std::size_t hi = upper_neighbor(s, i);
    if (lo != npos && hi != npos) return (v[hi] - v[lo]) / (s[hi] - s[lo]);
    if (hi != npos) return (v[hi] - v[i]) / (s[hi] - s[i]);
    if (lo != npos) return (v[i] - v[lo]) / (s[i] - s[lo]);
    throw ResolutionError("sample has no neighbour with a different staircase value");
}

}  // namespace

double fractal_derivative(const GridFunction& f, double t) {
    if (!f.table().set.contains(t)) return 0.0;
    const std::size_t i = f.index_of(t);
    if (i == f.size())
        throw ParameterError("t = " + std::to_string(t) + " is a set point but not a sample");
    return quotient_at(f, i);
}

GridFunction fractal_derivative(const GridFunction& f) {
    std::vector<double> d(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) d[i] = quotient_at(f, i);
    return GridFunction(f.table_ptr(), f.t(), std::move(d));
}

double fractal_integral(const GridFunction& f, double a, double b) {
    if (!(a < b)) throw ParameterError("integral needs a < b");
    const StaircaseTable& table = f.table();
    const double sa = eval_staircase(table, a);
    const double sb = eval_staircase(table, b);
    if (sa == sb) return 0.0;

    const auto& t = f.t();
    const auto& s = f.s();
    const auto& v = f.values();
    const auto i0 = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), a) - t.begin());
    const auto i_end = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), b) - t.begin());
    if (i_end < i0 + 2)
        throw ResolutionError("fewer than two samples in [" + std::to_string(a) + ", " +
                              std::to_string(b) + "]");
    const std::size_t i1 = i_end - 1;

    double total = kernels::stieltjes_sum(std::span<const double>(v).subspan(i0, i1 - i0),
                                          std::span<const double>(s).subspan(i0, i1 - i0 + 1));
    if (a < t[i0]) {
        if (i0 == 0) throw DomainError("a lies before the first sample");
        total += v[i0 - 1] * (s[i0] - sa);
    }
    if (b > t[i1]) total += v[i1] * (sb - s[i1]);
    return total;
}

std::vector<double> cumulative_integral(const GridFunction& f) {
    const auto& s = f.s();
    const auto& v = f.values();
    std::vector<double> out(f.size(), 0.0);
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i) {
        const double x = v[i - 1] * (s[i] - s[i - 1]);
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
        out[i] = sum + comp;
    }
    return out;
}

bool c_limit_holds(const GridFunction& f, double t, double limit, double eps, double delta) {
    if (!(eps > 0.0) || !(delta > 0.0)) throw ParameterError("eps and delta must be positive");
    const auto& ts = f.t();
    const auto begin = std::upper_bound(ts.begin(), ts.end(), t - delta);
    const auto end = std::lower_bound(ts.begin(), ts.end(), t + delta);
    bool any = false;
    for (auto it = begin; it != end; ++it) {
        if (*it == t) continue;
        any = true;
        const auto i = static_cast<std::size_t>(it - ts.begin());
        if (!(std::abs(f.values()[i] - limit) < eps)) return false;
    }
    if (!any) throw ResolutionError("no samples within delta of t");
    return true;
}

bool c_continuous_at(const GridFunction& f, double t, double eps, double delta) {
    const std::size_t i = f.index_of(t);
    if (i == f.size()) throw ParameterError("continuity test point must be a sample");
    return c_limit_holds(f, t, f.values()[i], eps, delta);
}

}  // namespace fractal
