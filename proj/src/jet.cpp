#include "twistor/jet.hpp"

#include <map>
#include <mutex>

#include "twistor/error.hpp"

namespace twistor {

struct JetShape {
    int vars = 0, order = 0;
    std::vector<std::vector<int>> exps;
    std::vector<int> degree;
    std::vector<size_t> count_upto;  // number of monomials of degree <= d
    std::map<std::vector<int>, int> index;
    struct Prod { int i, j, k; };
    std::vector<Prod> prod;
    struct Diff { int src, dst; double factor; };
    std::vector<std::vector<Diff>> diff;  // per variable
};

namespace {

void monomials_of_degree(int vars, int d, std::vector<int>& cur, int pos,
                         std::vector<std::vector<int>>& out) {
    if (pos == vars - 1) {
        cur[pos] = d;
        out.push_back(cur);
        return;
    }
    for (int e = d; e >= 0; --e) {
        cur[pos] = e;
        monomials_of_degree(vars, d - e, cur, pos + 1, out);
    }
}

std::shared_ptr<const JetShape> build_shape(int vars, int order) {
    auto s = std::make_shared<JetShape>();
    s->vars = vars;
    s->order = order;
    for (int d = 0; d <= order; ++d) {
        if (vars == 0) {
            if (d == 0) s->exps.push_back({});
        } else {
            std::vector<int> cur(vars, 0);
            monomials_of_degree(vars, d, cur, 0, s->exps);
        }
        s->count_upto.push_back(0);
    }
    for (size_t k = 0; k < s->exps.size(); ++k) {
        int d = 0;
        for (int e : s->exps[k]) d += e;
        s->degree.push_back(d);
        s->index[s->exps[k]] = static_cast<int>(k);
    }
    for (int d = 0; d <= order; ++d) {
        size_t c = 0;
        for (int dg : s->degree) c += dg <= d;
        s->count_upto[d] = c;
    }
    const int n = static_cast<int>(s->exps.size());
    std::vector<int> e(vars);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (s->degree[i] + s->degree[j] > order) continue;
            for (int v = 0; v < vars; ++v) e[v] = s->exps[i][v] + s->exps[j][v];
            s->prod.push_back({i, j, s->index.at(e)});
        }
    s->diff.resize(vars);
    for (int v = 0; v < vars; ++v)
        for (int k = 0; k < n; ++k) {
            if (s->exps[k][v] == 0) continue;
            e = s->exps[k];
            e[v] -= 1;
            s->diff[v].push_back({k, s->index.at(e), static_cast<double>(s->exps[k][v])});
        }
    return s;
}

std::shared_ptr<const JetShape> shape_for(int vars, int order) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const JetShape>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{vars, order}];
    if (!slot) slot = build_shape(vars, order);
    return slot;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

Jet::Jet(int vars, int order, cd value) : vars_(vars), order_(order) {
    if (vars < 0 || order < 0) throw Error("jet shape must be non-negative");
    shape_ = shape_for(vars, order);
    c_.assign(shape_->exps.size(), 0.0);
    c_[0] = value;
}

Jet Jet::variable(int vars, int order, int index, cd value) {
    Jet j(vars, order, value);
    if (index < 0 || index >= vars) throw Error("jet variable index out of range");
    if (order >= 1) {
        std::vector<int> e(vars, 0);
        e[index] = 1;
        j.c_[j.shape_->index.at(e)] = 1.0;
    }
    return j;
}

cd Jet::coeff(const std::vector<int>& exps) const {
    auto it = shape_->index.find(exps);
    return it == shape_->index.end() ? cd(0.0) : c_[it->second];
}

cd Jet::derivative(const std::vector<int>& exps) const {
    double f = 1.0;
    for (int e : exps) f *= factorial(e);
    return coeff(exps) * f;
}

Jet Jet::truncate(int order) const {
    if (order >= order_) return *this;
    if (order < 0) throw Error("jet order exhausted");
    Jet r;
    r.vars_ = vars_;
    r.order_ = order;
    r.shape_ = shape_for(vars_, order);
    r.c_.assign(c_.begin(), c_.begin() + static_cast<long>(r.shape_->exps.size()));
    return r;
}

Jet Jet::partial(int var) const {
    if (order_ == 0) throw Error("jet order exhausted");
    Jet r = Jet(vars_, order_ - 1);
    const size_t lim = r.c_.size();
    for (const auto& d : shape_->diff.at(var))
        if (static_cast<size_t>(d.dst) < lim) r.c_[d.dst] += d.factor * c_[d.src];
    return r;
}

void Jet::match(const Jet& o) {
    if (o.vars_ != vars_) throw Error("jet variable count mismatch");
    if (o.order_ < order_) *this = truncate(o.order_);
}

Jet& Jet::operator+=(const Jet& o) {
    match(o);
    for (size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    match(o);
    for (size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
}

Jet& Jet::operator*=(cd s) {
    for (cd& c : c_) c *= s;
    return *this;
}

Jet Jet::operator-() const {
    Jet r = *this;
    for (cd& c : r.c_) c = -c;
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    if (a.vars_ != b.vars_) throw Error("jet variable count mismatch");
    const Jet& lo = a.order_ <= b.order_ ? a : b;
    Jet r(lo.vars_, lo.order_);
    for (const auto& p : lo.shape_->prod) r.c_[p.k] += a.c_[p.i] * b.c_[p.j];
    return r;
}

Jet Jet::compose(const Jet& a, const std::vector<cd>& f) {
    Jet n = a;
    n.c_[0] = 0.0;
    Jet r(a.vars_, a.order_, f.back());
    for (size_t m = f.size() - 1; m-- > 0;) r = r * n + f[m];
    return r;
}

Jet operator/(cd s, const Jet& a) {
    cd a0 = a.value();
    if (a0 == cd(0.0)) throw Error("jet division by a vanishing constant term");
    std::vector<cd> f(static_cast<size_t>(a.order_) + 1);
    cd p = s / a0;
    for (auto& x : f) {
        x = p;
        p *= -1.0 / a0;
    }
    return Jet::compose(a, f);
}

Jet operator/(const Jet& a, const Jet& b) { return a * (1.0 / b); }

Jet pow(const Jet& a, int n) {
    if (n < 0) return 1.0 / pow(a, -n);
    Jet r(a.vars_, a.order_, 1.0), b = a;
    while (n > 0) {
        if (n & 1) r = r * b;
        n >>= 1;
        if (n) b = b * b;
    }
    return r;
}

Jet pow(const Jet& a, double alpha) {
    cd a0 = a.value();
    if (a0 == cd(0.0)) throw Error("jet power of a vanishing constant term");
    std::vector<cd> f(static_cast<size_t>(a.order_) + 1);
    cd binom = 1.0;
    for (int m = 0; m <= a.order_; ++m) {
        f[m] = binom * std::pow(a0, alpha - m);
        binom *= (alpha - m) / (m + 1.0);
    }
    return Jet::compose(a, f);
}

Jet exp(const Jet& a) {
    cd e = std::exp(a.value());
    std::vector<cd> f(static_cast<size_t>(a.order_) + 1);
    for (int m = 0; m <= a.order_; ++m) f[m] = e / factorial(m);
    return Jet::compose(a, f);
}

Jet log(const Jet& a) {
    cd a0 = a.value();
    if (a0 == cd(0.0)) throw Error("jet logarithm of a vanishing constant term");
    std::vector<cd> f(static_cast<size_t>(a.order_) + 1);
    f[0] = std::log(a0);
    for (int m = 1; m <= a.order_; ++m) f[m] = (m % 2 ? 1.0 : -1.0) / (static_cast<double>(m) * std::pow(a0, m));
    return Jet::compose(a, f);
}

Jet sqrt(const Jet& a) { return pow(a, 0.5); }

}  // namespace twistor
