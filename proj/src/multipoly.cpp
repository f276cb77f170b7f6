#include "polyberg/multipoly.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "polyberg/special_fn.hpp"

namespace polyberg::multipoly {

namespace {

void check_same_dim(int a, int b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

MultiIndex::MultiIndex(std::vector<int> comps) : k_(std::move(comps)) {
  if (k_.empty()) throw std::invalid_argument("MultiIndex: dimension must be >= 1");
  for (int v : k_)
    if (v < 0) throw std::invalid_argument("MultiIndex: components must be >= 0");
}

MultiIndex MultiIndex::unit(int n, int p) {
  std::vector<int> c(n, 0);
  if (p < 0 || p >= n) throw std::out_of_range("MultiIndex::unit: component out of range");
  c[p] = 1;
  return MultiIndex(std::move(c));
}

int MultiIndex::total() const {
  int s = 0;
  for (int v : k_) s += v;
  return s;
}

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int v : k_)
    for (int i = 2; i <= v; ++i) f *= i;
  return f;
}

MultiIndex MultiIndex::plus(int p, int delta) const {
  std::vector<int> c(k_);
  c.at(p) += delta;
  return MultiIndex(std::move(c));
}

bool MultiIndex::operator<(const MultiIndex& o) const {
  return std::lexicographical_compare(k_.begin(), k_.end(), o.k_.begin(), o.k_.end());
}

void for_each_multi_index(int n, int max_total,
                          const std::function<void(const MultiIndex&)>& fn) {
  std::vector<int> cur(n, 0);
  const std::function<void(int, int)> rec = [&](int pos, int budget) {
    if (pos == n) {
      fn(MultiIndex(cur));
      return;
    }
    for (int v = 0; v <= budget; ++v) {
      cur[pos] = v;
      rec(pos + 1, budget - v);
    }
    cur[pos] = 0;
  };
  if (n >= 1 && max_total >= 0) rec(0, max_total);
}

bool MixedPoly::GradedLess::operator()(const Key& a, const Key& b) const {
  const int da = a.first.total() + a.second.total();
  const int db = b.first.total() + b.second.total();
  if (da != db) return da < db;
  if (a.first < b.first) return true;
  if (b.first < a.first) return false;
  return a.second < b.second;
}

MixedPoly::MixedPoly(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("MixedPoly: dimension must be >= 1");
}

MixedPoly MixedPoly::monomial(const MultiIndex& j, const MultiIndex& k, cplx c) {
  MixedPoly p(j.dim());
  p.add_term(j, k, c);
  return p;
}

MixedPoly MixedPoly::constant(int dim, cplx c) {
  return monomial(MultiIndex::zeros(dim), MultiIndex::zeros(dim), c);
}

void MixedPoly::add_term(const MultiIndex& j, const MultiIndex& k, cplx c) {
  check_same_dim(j.dim(), dim_, "MixedPoly::add_term");
  check_same_dim(k.dim(), dim_, "MixedPoly::add_term");
  if (c == cplx(0.0, 0.0)) return;
  const Key key(j, k);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, c);
  } else {
    it->second += c;
    if (it->second == cplx(0.0, 0.0)) terms_.erase(it);
  }
}

cplx MixedPoly::coeff(const MultiIndex& j, const MultiIndex& k) const {
  auto it = terms_.find(Key(j, k));
  return it == terms_.end() ? cplx(0.0) : it->second;
}

int MixedPoly::z_degree() const {
  int d = 0;
  for (const auto& [key, c] : terms_) d = std::max(d, key.first.total());
  return d;
}

int MixedPoly::zbar_degree() const {
  int d = 0;
  for (const auto& [key, c] : terms_) d = std::max(d, key.second.total());
  return d;
}

double MixedPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [key, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

cplx MixedPoly::operator()(std::span<const cplx> z) const {
  if (static_cast<int>(z.size()) != dim_)
    throw std::invalid_argument("MixedPoly::operator(): wrong point dimension");
  cplx acc(0.0);
  for (const auto& [key, c] : terms_) {
    cplx t = c;
    for (int i = 0; i < dim_; ++i) {
      for (int r = 0; r < key.first[i]; ++r) t *= z[i];
      const cplx zb = std::conj(z[i]);
      for (int r = 0; r < key.second[i]; ++r) t *= zb;
    }
    acc += t;
  }
  return acc;
}

MixedPoly MixedPoly::conjugated() const {
  MixedPoly r(dim_);
  for (const auto& [key, c] : terms_) r.add_term(key.second, key.first, std::conj(c));
  return r;
}

MixedPoly MixedPoly::operator+(const MixedPoly& o) const {
  check_same_dim(dim_, o.dim_, "MixedPoly::operator+");
  MixedPoly r(*this);
  for (const auto& [key, c] : o.terms_) r.add_term(key.first, key.second, c);
  return r;
}

MixedPoly MixedPoly::operator-(const MixedPoly& o) const { return *this + o * cplx(-1.0); }

MixedPoly MixedPoly::operator*(const MixedPoly& o) const {
  check_same_dim(dim_, o.dim_, "MixedPoly::operator*");
  MixedPoly r(dim_);
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_) {
      std::vector<int> j(dim_), k(dim_);
      for (int i = 0; i < dim_; ++i) {
        j[i] = ka.first[i] + kb.first[i];
        k[i] = ka.second[i] + kb.second[i];
      }
      r.add_term(MultiIndex(std::move(j)), MultiIndex(std::move(k)), ca * cb);
    }
  return r;
}

MixedPoly MixedPoly::operator*(cplx s) const {
  MixedPoly r(dim_);
  for (const auto& [key, c] : terms_) r.add_term(key.first, key.second, c * s);
  return r;
}

MixedPoly MixedPoly::pruned(double eps) const {
  MixedPoly r(dim_);
  for (const auto& [key, c] : terms_)
    if (std::abs(c) > eps) r.add_term(key.first, key.second, c);
  return r;
}

std::string MixedPoly::to_json() const {
  nlohmann::ordered_json out;
  out["dim"] = dim_;
  out["terms"] = nlohmann::ordered_json::array();
  for (const auto& [key, c] : terms_) {
    nlohmann::ordered_json t;
    t["j"] = key.first.comps();
    t["k"] = key.second.comps();
    t["re"] = c.real();
    t["im"] = c.imag();
    out["terms"].push_back(std::move(t));
  }
  return out.dump();
}

MixedPoly MixedPoly::from_json(const std::string& text) {
  nlohmann::json in;
  try {
    in = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("MixedPoly::from_json: ") + e.what());
  }
  if (!in.is_object() || !in.contains("dim") || !in.contains("terms") ||
      !in["dim"].is_number_integer() || !in["terms"].is_array())
    throw std::invalid_argument("MixedPoly::from_json: expected {\"dim\", \"terms\"}");
  const int dim = in["dim"].get<int>();
  if (dim < 1) throw std::invalid_argument("MixedPoly::from_json: dim must be >= 1");
  MixedPoly p(dim);
  for (const auto& t : in["terms"]) {
    if (!t.is_object() || !t.contains("j") || !t.contains("k"))
      throw std::invalid_argument("MixedPoly::from_json: malformed term");
    const auto read_index = [&](const nlohmann::json& arr) {
      if (!arr.is_array() || static_cast<int>(arr.size()) != dim)
        throw std::invalid_argument("MixedPoly::from_json: index dimension mismatch");
      std::vector<int> c;
      for (const auto& v : arr) {
        if (!v.is_number_integer() || v.get<int>() < 0)
          throw std::invalid_argument("MixedPoly::from_json: index entries must be >= 0");
        c.push_back(v.get<int>());
      }
      return MultiIndex(std::move(c));
    };
    const double re = t.value("re", 0.0);
    const double im = t.value("im", 0.0);
    p.add_term(read_index(t["j"]), read_index(t["k"]), cplx(re, im));
  }
  return p;
}

MixedPoly wirtinger_deriv(const MixedPoly& p, const MultiIndex& k) {
  check_same_dim(k.dim(), p.dim(), "wirtinger_deriv");
  MixedPoly r(p.dim());
  for (const auto& [key, c] : p.terms()) {
    const MultiIndex& zbar = key.second;
    double factor = 1.0;
    bool alive = true;
    std::vector<int> rest(p.dim());
    for (int i = 0; i < p.dim(); ++i) {
      if (zbar[i] < k[i]) {
        alive = false;
        break;
      }
      for (int d = 0; d < k[i]; ++d) factor *= zbar[i] - d;
      rest[i] = zbar[i] - k[i];
    }
    if (alive) r.add_term(key.first, MultiIndex(std::move(rest)), c * factor);
  }
  return r;
}

bool is_m_analytic(const MixedPoly& p, int m) {
  if (m < 1) throw std::domain_error("is_m_analytic: order must be >= 1");
  for (const auto& [key, c] : p.terms())
    if (key.second.total() >= m) return false;
  return true;
}

bool is_m_analytic_derivative_route(const MixedPoly& p, int m) {
  if (m < 1) throw std::domain_error("is_m_analytic: order must be >= 1");
  bool ok = true;
  for_each_multi_index(p.dim(), m, [&](const MultiIndex& k) {
    if (k.total() != m || !ok) return;
    if (!wirtinger_deriv(p, k).empty()) ok = false;
  });
  return ok;
}

MixedPoly compute_g(const MixedPoly& p, int m) {
  if (!is_m_analytic(p, m))
    throw std::domain_error("compute_g: polynomial is not in the order-m class");
  const int n = p.dim();
  MixedPoly g(n);
  for_each_multi_index(n, m - 1, [&](const MultiIndex& k) {
    const double sign = (k.total() % 2 == 0) ? 1.0 : -1.0;
    const MixedPoly zbar_k = MixedPoly::monomial(MultiIndex::zeros(n), k, sign / k.factorial());
    g = g + wirtinger_deriv(p, k) * zbar_k;
  });
  const MixedPoly out = g.pruned(1e-12 * p.max_abs_coeff());
  if (out.zbar_degree() != 0)
    throw std::logic_error("compute_g: conjugate terms failed to cancel");
  return out;
}

MixedPoly recenter(const MixedPoly& p, std::span<const cplx> a) {
  if (static_cast<int>(a.size()) != p.dim())
    throw std::invalid_argument("recenter: wrong center dimension");
  const int n = p.dim();
  MixedPoly out(n);
  for (const auto& [key, c] : p.terms()) {
    MixedPoly acc = MixedPoly::constant(n, c);
    for (int i = 0; i < n; ++i) {
      // (w_i + a_i)^{j_i} expanded in powers of w_i.
      if (key.first[i] > 0) {
        MixedPoly bin(n);
        cplx apow(1.0);
        for (int r = key.first[i]; r >= 0; --r) {
          std::vector<int> j(n, 0);
          j[i] = r;
          bin.add_term(MultiIndex(std::move(j)), MultiIndex::zeros(n),
                       special_fn::binomial_int(key.first[i], r) * apow);
          apow *= a[i];
        }
        acc = acc * bin;
      }
      if (key.second[i] > 0) {
        MixedPoly bin(n);
        cplx apow(1.0);
        const cplx ab = std::conj(a[i]);
        for (int r = key.second[i]; r >= 0; --r) {
          std::vector<int> k(n, 0);
          k[i] = r;
          bin.add_term(MultiIndex::zeros(n), MultiIndex(std::move(k)),
                       special_fn::binomial_int(key.second[i], r) * apow);
          apow *= ab;
        }
        acc = acc * bin;
      }
    }
    out = out + acc;
  }
  return out;
}

MixedPoly linear_change(const MixedPoly& p, const Eigen::MatrixXcd& M) {
  const int n = p.dim();
  if (M.rows() != n || M.cols() != n)
    throw std::invalid_argument("linear_change: matrix must be dim x dim");
  // Linear forms (Mz)_r and their conjugates as degree-1 polynomials.
  std::vector<MixedPoly> lin, lin_bar;
  for (int r = 0; r < n; ++r) {
    MixedPoly L(n), Lb(n);
    for (int s = 0; s < n; ++s) {
      if (M(r, s) != cplx(0.0)) {
        L.add_term(MultiIndex::unit(n, s), MultiIndex::zeros(n), M(r, s));
        Lb.add_term(MultiIndex::zeros(n), MultiIndex::unit(n, s), std::conj(M(r, s)));
      }
    }
    lin.push_back(std::move(L));
    lin_bar.push_back(std::move(Lb));
  }
  MixedPoly out(n);
  for (const auto& [key, c] : p.terms()) {
    MixedPoly acc = MixedPoly::constant(n, c);
    for (int r = 0; r < n; ++r) {
      for (int e = 0; e < key.first[r]; ++e) acc = acc * lin[r];
      for (int e = 0; e < key.second[r]; ++e) acc = acc * lin_bar[r];
    }
    out = out + acc;
  }
  return out;
}

double ball_moment(const MultiIndex& j, const MultiIndex& k, int n, double alpha) {
  if (j.dim() != n || k.dim() != n)
    throw std::invalid_argument("ball_moment: index dimension mismatch");
  if (!(alpha > -1.0)) throw std::domain_error("ball_moment: alpha must be > -1");
  if (!(j == k)) return 0.0;
  // k! Gamma(n+a+1) B(a+1, n+|k|) / (Gamma(a+1) (n-1+|k|)!) telescopes to
  // k! Gamma(n+a+1) / Gamma(n+a+|k|+1).
  const int total = k.total();
  return k.factorial() * std::exp(std::lgamma(n + alpha + 1) - std::lgamma(n + alpha + total + 1));
}

cplx inner_product(const MixedPoly& p, const MixedPoly& q, const SpaceParams& params) {
  if (p.dim() != params.n || q.dim() != params.n)
    throw std::invalid_argument("inner_product: dimension mismatch");
  cplx acc(0.0);
  for (const auto& [ka, ca] : p.terms())
    for (const auto& [kb, cb] : q.terms()) {
      // z^{j1} zbar^{k1} * conj(z^{j2} zbar^{k2}) = z^{j1+k2} zbar^{k1+j2}.
      std::vector<int> j(p.dim()), k(p.dim());
      for (int i = 0; i < p.dim(); ++i) {
        j[i] = ka.first[i] + kb.second[i];
        k[i] = ka.second[i] + kb.first[i];
      }
      acc += ca * std::conj(cb) *
             ball_moment(MultiIndex(std::move(j)), MultiIndex(std::move(k)), params.n,
                         params.alpha);
    }
  return acc;
}

}  // namespace polyberg::multipoly
