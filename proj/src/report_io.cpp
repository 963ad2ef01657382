#include "hus/report_io.hpp"

#include <cstdio>
#include <sstream>

namespace hus {

namespace {

void append_kv(std::string& out, const char* key, const std::string& value) {
  out += '"';
  out += key;
  out += "\":";
  out += value;
}

std::string json_opt(const std::optional<double>& v) {
  return v ? format_double(*v) : "null";
}

std::string json_bool(bool b) { return b ? "true" : "false"; }

std::string json_eigen(const EigenClass& ec) {
  std::string s = "{";
  if (const auto* d = std::get_if<RealDistinct>(&ec)) {
    append_kv(s, "tag", "\"real_distinct\"");
    s += ',';
    append_kv(s, "lambda1", format_double(d->lambda1));
    s += ',';
    append_kv(s, "lambda2", format_double(d->lambda2));
  } else if (const auto* r = std::get_if<RealRepeated>(&ec)) {
    append_kv(s, "tag", "\"real_repeated\"");
    s += ',';
    append_kv(s, "lambda", format_double(r->lambda));
    s += ',';
    append_kv(s, "eta", format_double(r->eta));
  } else {
    const auto& c = std::get<ComplexPair>(ec);
    append_kv(s, "tag", "\"complex_pair\"");
    s += ',';
    append_kv(s, "alpha", format_double(c.alpha));
    s += ',';
    append_kv(s, "beta", format_double(c.beta));
  }
  s += '}';
  return s;
}

std::string json_report_fields(const StabilityReport& r,
                               const CertificationSummary* cert) {
  std::string s;
  append_kv(s, "matrix",
            "[" + format_double(r.matrix(0, 0)) + "," +
                format_double(r.matrix(0, 1)) + "," +
                format_double(r.matrix(1, 0)) + "," +
                format_double(r.matrix(1, 1)) + "]");
  s += ',';
  append_kv(s, "eigen_class", json_eigen(r.eigen));
  s += ',';
  append_kv(s, "stable", json_bool(r.stable));
  s += ',';
  append_kv(s, "marginal", json_bool(r.marginal));
  s += ',';
  std::string cands = "[";
  for (size_t i = 0; i < r.candidates.size(); ++i) {
    if (i) cands += ',';
    cands += "{\"label\":\"";
    cands += to_string(r.candidates[i].label);
    cands += "\",\"value\":";
    cands += format_double(r.candidates[i].value);
    cands += '}';
  }
  cands += ']';
  append_kv(s, "k_candidates", cands);
  s += ',';
  append_kv(s, "k", json_opt(r.k_reported));
  s += ',';
  append_kv(s, "lower_bound", json_opt(r.lower_bound));
  s += ',';
  append_kv(s, "best", json_bool(r.best_attained));
  s += ',';
  append_kv(s, "best_rule",
            r.best_rule ? "\"" + std::string(to_string(*r.best_rule)) + "\""
                        : "null");
  if (cert) {
    s += ',';
    std::string cj = "[";
    for (size_t i = 0; i < cert->specs.size(); ++i) {
      const SpecCertification& sc = cert->specs[i];
      if (i) cj += ',';
      cj += "{\"family\":\"" + sc.family + "\",\"eps\":" + format_double(sc.eps) +
            ",\"sup_dev\":" + format_double(sc.sup_dev) +
            ",\"ratio\":" + format_double(sc.ratio) +
            ",\"pass\":" + json_bool(sc.pass) + "}";
    }
    cj += ']';
    append_kv(s, "certification", cj);
  }
  return s;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_json(const StabilityReport& report,
                    const CertificationSummary* cert) {
  return "{" + json_report_fields(report, cert) + "}";
}

std::string to_json(const SecondOrderReport& report) {
  std::string s = "{";
  std::string roots = "{";
  if (const auto* rr = std::get_if<RealRoots>(&report.problem.roots)) {
    roots += "\"kind\":\"real\",\"lambda1\":" + format_double(rr->lambda1) +
             ",\"lambda2\":" + format_double(rr->lambda2);
  } else {
    const auto& cr = std::get<ComplexRoots>(report.problem.roots);
    roots += "\"kind\":\"complex\",\"alpha\":" + format_double(cr.alpha) +
             ",\"beta\":" + format_double(cr.beta);
  }
  roots += '}';
  append_kv(s, "roots", roots);
  s += ',';
  append_kv(s, "substitution",
            "\"" + std::string(to_string(report.problem.substitution)) + "\"");
  s += ',';
  s += json_report_fields(report.report, nullptr);
  s += ',';
  if (report.cross_check) {
    const FormulaCrossCheck& cc = *report.cross_check;
    std::string cj = "{\"candidate\":\"";
    cj += to_string(cc.candidate_label);
    cj += "\",\"candidate_k\":" + format_double(cc.candidate_value) +
          ",\"reference_k\":" + format_double(cc.reference_value) +
          ",\"abs_diff\":" + format_double(cc.abs_diff) + "}";
    append_kv(s, "cross_check", cj);
  } else {
    append_kv(s, "cross_check", "null");
  }
  s += '}';
  return s;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec) {
  os << "t,phi1,phi2,x1,x2,dev\n";
  for (size_t i = 0; i < rec.times.size(); ++i) {
    const Vec2& p = rec.phi[i];
    const Vec2 x = i < rec.x.size() ? rec.x[i] : Vec2{0.0, 0.0};
    const double dev =
        i < rec.deviation.size() ? rec.deviation[i] : vec_inf_norm(p - x);
    os << format_double(rec.times[i]) << ',' << format_double(p(0)) << ','
       << format_double(p(1)) << ',' << format_double(x(0)) << ','
       << format_double(x(1)) << ',' << format_double(dev) << '\n';
  }
}

}  // namespace hus
