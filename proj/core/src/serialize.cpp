#include "dopt/serialize.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace dopt {

namespace {

using boost::multiprecision::cpp_int;

json poly_to_json(const Polynomial<Rational>& p) {
  json arr = json::array();
  for (const auto& c : p.coeffs()) arr.push_back(rational_to_string(c));
  return arr;
}

json poly_to_json(const Polynomial<double>& p) {
  json arr = json::array();
  for (double c : p.coeffs()) arr.push_back(c);
  return arr;
}

Polynomial<Rational> poly_from_json(const json& j) {
  std::vector<Rational> c;
  for (const auto& v : j) {
    if (v.is_string())
      c.push_back(rational_from_string(v.get<std::string>()));
    else if (v.is_number_integer())
      c.push_back(Rational(v.get<long long>()));
    else
      throw Error("rational-mode coefficients must be strings or integers");
  }
  return Polynomial<Rational>(std::move(c));
}

}  // namespace

std::string rational_to_string(const Rational& x) {
  const cpp_int num = numerator(x), den = denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

// cpp_int's string constructor honors 0/0x prefixes; force base 10 and map
// malformed literals to our error type.
cpp_int int_from_decimal(std::string s, const std::string& whole) {
  bool neg = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    neg = s[0] == '-';
    s.erase(0, 1);
  }
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw Error("malformed rational literal: " + whole);
  s.erase(0, std::min(s.find_first_not_of('0'), s.size() - 1));
  cpp_int v(s);
  return neg ? -v : v;
}

}  // namespace

Rational rational_from_string(const std::string& s) {
  if (s.empty()) throw Error("empty rational literal");
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    cpp_int num = int_from_decimal(s.substr(0, slash), s);
    cpp_int den = int_from_decimal(s.substr(slash + 1), s);
    if (den == 0) throw Error("zero denominator in rational literal");
    return Rational(num, den);
  }
  // decimal or scientific literal
  std::string body = s;
  int exp10 = 0;
  const auto e = body.find_first_of("eE");
  if (e != std::string::npos) {
    exp10 = std::stoi(body.substr(e + 1));
    body = body.substr(0, e);
  }
  const auto dot = body.find('.');
  if (dot != std::string::npos) {
    exp10 -= static_cast<int>(body.size() - dot - 1);
    body.erase(dot, 1);
  }
  if (body.empty() || body == "-" || body == "+")
    throw Error("malformed rational literal: " + s);
  Rational r(int_from_decimal(body, s));
  for (int i = 0; i < exp10; ++i) r *= 10;
  for (int i = 0; i > exp10; --i) r /= 10;
  return r;
}

json to_json(const RationalFunction<Rational>& r) {
  return {{"num", poly_to_json(r.num())},
          {"den", poly_to_json(r.den())},
          {"mode", "rational"}};
}

json to_json(const RationalFunction<double>& r) {
  return {{"num", poly_to_json(r.num())},
          {"den", poly_to_json(r.den())},
          {"mode", "floating"}};
}

RationalFunction<Rational> rf_from_json(const json& j) {
  if (j.contains("mode") && j.at("mode") != "rational")
    throw Error("expected a rational-mode transfer function");
  return RationalFunction<Rational>(poly_from_json(j.at("num")),
                                    poly_from_json(j.at("den")));
}

json to_json(const RfMatrix<Rational>& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

RfMatrix<Rational> matrix_from_json(const json& j) {
  const int rows = static_cast<int>(j.size());
  const int cols = rows > 0 ? static_cast<int>(j.at(0).size()) : 0;
  RfMatrix<Rational> m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) m(i, k) = rf_from_json(j.at(i).at(k));
  return m;
}

json to_json(const PartitionedMatrix<Rational>& p) {
  return {{"m", p.m},
          {"label", p.label},
          {"b11", to_json(p.b11)},
          {"b12", to_json(p.b12)},
          {"b21", to_json(p.b21)},
          {"b22", to_json(p.b22)}};
}

PartitionedMatrix<Rational> partitioned_from_json(const json& j) {
  PartitionedMatrix<Rational> p(j.at("m").get<int>(),
                                j.value("label", std::string{}));
  p.b11 = rf_from_json(j.at("b11"));
  p.b12 = matrix_from_json(j.at("b12"));
  p.b21 = matrix_from_json(j.at("b21"));
  p.b22 = matrix_from_json(j.at("b22"));
  p.validate();
  return p;
}

json to_json(const Certificate& c) {
  json conds = json::array();
  for (const auto& cond : c.conditions)
    conds.push_back(
        {{"id", cond.id}, {"passed", cond.passed}, {"evidence", cond.evidence}});
  json lam = json::array();
  for (const auto& z : c.lambda_grid) lam.push_back({z.real(), z.imag()});
  return {{"subject", c.subject},
          {"verdict", to_string(c.verdict)},
          {"conditions", std::move(conds)},
          {"eps_grid", c.eps_grid},
          {"lambda_grid", std::move(lam)},
          {"lambda_radius", c.lambda_radius},
          {"margin_tolerance", c.margin_tolerance}};
}

json to_json(const RootReport& r) {
  json roots = json::array();
  for (const auto& root : r.roots)
    roots.push_back({root.z.real(), root.z.imag(), root.multiplicity});
  json circle = json::array();
  for (const auto& z : r.on_circle) circle.push_back({z.real(), z.imag()});
  return {{"roots", std::move(roots)},
          {"max_modulus", r.max_modulus},
          {"all_inside_open_disk", r.all_inside_open_disk},
          {"on_circle", std::move(circle)}};
}

json to_json(const Decomposition<Rational>& d) {
  json j = {{"g_opt", to_json(d.g_opt)},
            {"g_con", to_json(d.g_con)},
            {"phi", to_json(d.phi)},
            {"p", d.p},
            {"q", d.q}};
  if (d.f_applied) j["f_applied"] = to_json(*d.f_applied);
  return j;
}

json to_json(const Factoring<Rational>& f) {
  return {{"g_con1", to_json(f.g_con1)},
          {"g_con2", to_json(f.g_con2)},
          {"m1", f.m1},
          {"m2", f.m2},
          {"cert1", to_json(f.cert1)},
          {"cert2", to_json(f.cert2)}};
}

}  // namespace dopt
