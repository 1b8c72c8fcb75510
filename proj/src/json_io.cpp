#include "zaklab/json_io.hpp"

#include <cmath>
#include <set>

namespace zaklab {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::set<std::string>& required,
                  const std::set<std::string>& optional, const char* what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!required.count(it.key()) && !optional.count(it.key()))
      throw std::invalid_argument(std::string(what) + ": unknown key '" + it.key() + "'");
  for (const auto& k : required)
    if (!j.contains(k))
      throw std::invalid_argument(std::string(what) + ": missing key '" + k + "'");
}

}  // namespace

json torus_to_json(const TorusSpec& spec) {
  json j;
  j["d"] = spec.d;
  j["gamma"] = std::vector<double>(spec.gamma.begin(), spec.gamma.begin() + spec.d);
  j["alpha"] = std::vector<double>(spec.alpha.begin(), spec.alpha.begin() + spec.d);
  j["beta"] = std::vector<double>(spec.beta.begin(), spec.beta.begin() + spec.d);
  j["c0"] = spec.c0;
  j["lambda_re"] = spec.lambda.real();
  j["lambda_im"] = spec.lambda.imag();
  return j;
}

void validate_torus_json(const json& j) {
  require_keys(j, {"d", "gamma", "alpha", "beta", "c0", "lambda_re", "lambda_im"}, {},
               "TorusSpec");
  int d = j.at("d").get<int>();
  if (d < 1 || d > 3) throw std::invalid_argument("TorusSpec: key 'd' must be 1, 2 or 3");
  for (const char* key : {"gamma", "alpha", "beta"}) {
    const auto& arr = j.at(key);
    if (!arr.is_array() || (int)arr.size() != d)
      throw std::invalid_argument(std::string("TorusSpec: key '") + key +
                                  "' must be an array of length d");
  }
}

TorusSpec torus_from_json(const json& j) {
  validate_torus_json(j);
  TorusSpec spec;
  spec.d = j.at("d").get<int>();
  for (int i = 0; i < spec.d; ++i) {
    spec.gamma[i] = j.at("gamma")[i].get<double>();
    spec.alpha[i] = j.at("alpha")[i].get<double>();
    spec.beta[i] = j.at("beta")[i].get<double>();
  }
  for (int i = spec.d; i < 3; ++i) {
    spec.gamma[i] = 1.0;
    spec.alpha[i] = 1.0;
    spec.beta[i] = 0.0;
  }
  spec.c0 = j.at("c0").get<double>();
  spec.lambda = cplx{j.at("lambda_re").get<double>(), j.at("lambda_im").get<double>()};
  spec.validate();
  return spec;
}

json field_to_json(const FourierField& f) {
  json arr = json::array();
  const auto& lat = f.lattice();
  for (std::size_t i = 0; i < f.size(); ++i) {
    cplx c = f.coeffs()[i];
    if (c == cplx{0.0, 0.0}) continue;
    IVec3 m = lat.m_at(i);
    json rec;
    rec["m"] = std::vector<int>(m.begin(), m.begin() + lat.dim());
    rec["re"] = c.real();
    rec["im"] = c.imag();
    arr.push_back(rec);
  }
  return arr;
}

void validate_field_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("FourierField: expected an array");
  for (const auto& rec : j) {
    require_keys(rec, {"m", "re", "im"}, {}, "FourierField record");
    if (!rec.at("m").is_array())
      throw std::invalid_argument("FourierField record: key 'm' must be an array");
  }
}

FourierField field_from_json(const json& j, const DualLattice& lat) {
  validate_field_json(j);
  FourierField f(lat);
  for (const auto& rec : j) {
    const auto& marr = rec.at("m");
    if ((int)marr.size() != lat.dim())
      throw std::invalid_argument("FourierField record: key 'm' has wrong dimension");
    IVec3 m{0, 0, 0};
    for (int i = 0; i < lat.dim(); ++i) m[i] = marr[i].get<int>();
    f.set(m, cplx{rec.at("re").get<double>(), rec.at("im").get<double>()});
  }
  return f;
}

json spectrum_to_json(const SpacetimeSpectrum& s) {
  json j;
  std::vector<double> taus(s.n_tau());
  for (int i = 0; i < s.n_tau(); ++i) taus[i] = s.tau(i);
  j["tau"] = taus;
  j["delta"] = s.delta();
  json entries = json::array();
  const auto& lat = s.lattice();
  for (std::size_t ik = 0; ik < lat.size(); ++ik) {
    bool any = false;
    for (int jt = 0; jt < s.n_tau() && !any; ++jt) any = s.value(jt, ik) != cplx{0.0, 0.0};
    if (!any) continue;
    IVec3 m = lat.m_at(ik);
    json e;
    e["m"] = std::vector<int>(m.begin(), m.begin() + lat.dim());
    std::vector<double> re(s.n_tau()), im(s.n_tau());
    for (int jt = 0; jt < s.n_tau(); ++jt) {
      re[jt] = s.value(jt, ik).real();
      im[jt] = s.value(jt, ik).imag();
    }
    e["values_re"] = re;
    e["values_im"] = im;
    entries.push_back(e);
  }
  j["entries"] = entries;
  return j;
}

void validate_spectrum_json(const json& j) {
  require_keys(j, {"tau", "entries"}, {"delta"}, "SpacetimeSpectrum");
  if (!j.at("tau").is_array())
    throw std::invalid_argument("SpacetimeSpectrum: key 'tau' must be an array");
  std::size_t nt = j.at("tau").size();
  for (const auto& e : j.at("entries")) {
    require_keys(e, {"m", "values_re", "values_im"}, {}, "SpacetimeSpectrum entry");
    if (e.at("values_re").size() != nt || e.at("values_im").size() != nt)
      throw std::invalid_argument(
          "SpacetimeSpectrum entry: values length must match key 'tau'");
  }
}

std::string csv_quote(const std::string& s) {
  bool needs = s.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

json finite_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace zaklab
