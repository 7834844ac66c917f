// Command-line front end: `qzv check <name>` runs one named identity check
// (or `check all` for a whole profile) and `qzv value` prints individual
// zeta values. All mathematical output goes to stdout and is byte-stable
// across runs and worker counts; timings and counters go to stderr.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qzv/checks.hpp"
#include "qzv/mzv.hpp"

namespace {

using qzv::rational;

bool parse_rational_arg(const std::string& s, rational& out) {
  auto parse_ll = [](const std::string& v, long long& x) {
    if (v.empty()) return false;
    size_t pos = 0;
    try {
      x = std::stoll(v, &pos);
    } catch (...) {
      return false;
    }
    return pos == v.size();
  };
  size_t slash = s.find('/');
  long long num = 0, den = 1;
  if (slash == std::string::npos) {
    if (!parse_ll(s, num)) return false;
  } else {
    if (!parse_ll(s.substr(0, slash), num)) return false;
    if (!parse_ll(s.substr(slash + 1), den)) return false;
    if (den == 0) return false;
  }
  out = rational(num, den);
  return true;
}

bool parse_index_arg(const std::string& s, qzv::index& out) {
  out.clear();
  size_t i = 0;
  while (i < s.size()) {
    size_t j = s.find(',', i);
    if (j == std::string::npos) j = s.size();
    std::string piece = s.substr(i, j - i);
    long long v = 0;
    size_t pos = 0;
    try {
      v = std::stoll(piece, &pos);
    } catch (...) {
      return false;
    }
    if (pos != piece.size() || v < 1 || v > 64) return false;
    out.push_back(static_cast<int>(v));
    i = j + 1;
  }
  return !out.empty();
}

void emit_reports_text(const std::vector<qzv::check_report>& reps) {
  std::string out;
  for (const qzv::check_report& r : reps) out += qzv::report_text(r);
  std::fputs(out.c_str(), stdout);
}

void emit_reports_json(const std::vector<qzv::check_report>& reps) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const qzv::check_report& r : reps) {
    nlohmann::ordered_json o;
    o["name"] = r.name;
    o["params"] = r.params;
    o["status"] = r.status;
    if (r.status == "fail") {
      o["detail"] = r.detail;
      o["witness_monomial"] = r.witness_monomial;
      o["lhs"] = r.lhs_coeff;
      o["rhs"] = r.rhs_coeff;
    } else if (r.status == "error") {
      o["detail"] = r.detail;
    }
    arr.push_back(std::move(o));
  }
  std::fputs((arr.dump(2) + "\n").c_str(), stdout);
}

void emit_stderr_summary(const std::vector<qzv::check_report>& reps) {
  for (const qzv::check_report& r : reps)
    std::fprintf(stderr, "# %s: %.3fs\n", r.name.c_str(), r.seconds);
  std::fprintf(stderr, "# invariants: checked=%llu failed=%llu\n",
               static_cast<unsigned long long>(qzv::stats::invariants_checked()),
               static_cast<unsigned long long>(qzv::stats::invariants_failed()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact verification of interpolated q-series identities"};
  app.require_subcommand(1);

  // --- check ---------------------------------------------------------------
  CLI::App* check = app.add_subcommand("check", "run a named identity check");
  std::string check_name;
  check->add_option("name", check_name, "check name, or 'all'")->required();
  int opt_r = 1, opt_udeg = 4, opt_qord = 8, opt_zord = 8, opt_maxw = 6, opt_jobs = 1;
  std::string opt_t = "symbolic", opt_profile = "quick", opt_format = "text";
  check->add_option("--r", opt_r, "number of interpolation levels");
  check->add_option("--u-deg", opt_udeg, "total degree cap for the index variables");
  check->add_option("--q-ord", opt_qord, "q-expansion order");
  check->add_option("--z-ord", opt_zord, "z-expansion order");
  check->add_option("--t", opt_t, "'symbolic' or a rational value for t");
  check->add_option("--max-weight", opt_maxw, "largest index weight to enumerate");
  check->add_option("--profile", opt_profile, "parameter profile for 'all': quick|full");
  check->add_option("--jobs", opt_jobs, "worker threads for 'all'");
  check->add_option("--format", opt_format, "output format: text|json");

  // --- value ---------------------------------------------------------------
  CLI::App* value = app.add_subcommand("value", "print one zeta value");
  bool v_zeta_t = false, v_zeta_star = false, v_zeta = false;
  std::string v_index, v_t = "symbolic", v_format = "text";
  int v_qord = 8;
  value->add_flag("--zeta-t", v_zeta_t, "interpolated zeta value (polynomial in t)");
  value->add_flag("--zeta-star", v_zeta_star, "weak-inequality zeta value");
  value->add_flag("--zeta", v_zeta, "strict-inequality zeta value");
  value->add_option("--index", v_index, "comma-separated index, e.g. 2,1")->required();
  value->add_option("--t", v_t, "'symbolic' or a rational value for t");
  value->add_option("--q-ord", v_qord, "q-expansion order");
  value->add_option("--format", v_format, "output format: text|json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) {
      if (opt_format != "text" && opt_format != "json") {
        std::fprintf(stderr, "unknown format: %s\n", opt_format.c_str());
        return 2;
      }
      qzv::check_params p;
      if (opt_r < 1) {
        std::fprintf(stderr, "r must be >= 1\n");
        return 2;
      }
      if (opt_udeg < 1 || opt_qord < 1 || opt_zord < 1 || opt_maxw < 1) {
        std::fprintf(stderr, "degree and order parameters must be >= 1\n");
        return 2;
      }
      p.r = opt_r;
      p.u_deg = opt_udeg;
      p.q_ord = opt_qord;
      p.z_ord = opt_zord;
      p.max_weight = opt_maxw;
      if (opt_t != "symbolic") {
        p.t_symbolic = false;
        if (!parse_rational_arg(opt_t, p.t_value)) {
          std::fprintf(stderr, "invalid value for --t: %s\n", opt_t.c_str());
          return 2;
        }
      }
      std::vector<qzv::check_report> reps;
      if (check_name == "all") {
        if (opt_profile != "quick" && opt_profile != "full") {
          std::fprintf(stderr, "unknown profile: %s\n", opt_profile.c_str());
          return 2;
        }
        reps = qzv::run_jobs(qzv::profile_jobs(opt_profile), opt_jobs);
      } else {
        const std::vector<std::string>& names = qzv::check_names();
        if (std::find(names.begin(), names.end(), check_name) == names.end()) {
          std::fprintf(stderr, "unknown check: %s\n", check_name.c_str());
          return 2;
        }
        reps.push_back(qzv::run_check(check_name, p));
      }
      if (opt_format == "json") {
        emit_reports_json(reps);
      } else {
        emit_reports_text(reps);
      }
      emit_stderr_summary(reps);
      for (const qzv::check_report& r : reps)
        if (r.status != "pass") return 1;
      return 0;
    }

    // value
    if (v_format != "text" && v_format != "json") {
      std::fprintf(stderr, "unknown format: %s\n", v_format.c_str());
      return 2;
    }
    int kinds = (v_zeta_t ? 1 : 0) + (v_zeta_star ? 1 : 0) + (v_zeta ? 1 : 0);
    if (kinds != 1) {
      std::fprintf(stderr, "choose exactly one of --zeta-t, --zeta-star, --zeta\n");
      return 2;
    }
    if (v_qord < 1) {
      std::fprintf(stderr, "q-ord must be >= 1\n");
      return 2;
    }
    qzv::index k;
    if (!parse_index_arg(v_index, k)) {
      std::fprintf(stderr, "invalid index: %s\n", v_index.c_str());
      return 2;
    }
    qzv::series result = [&] {
      if (v_zeta_t) {
        qzv::tpoly tp = qzv::zeta_t_q(k, v_qord);
        qzv::context_spec s;
        s.q_order = v_qord;
        if (v_t == "symbolic") {
          s.has_t = true;
        } else {
          s.t_is_value = true;
          if (!parse_rational_arg(v_t, s.t_value))
            throw qzv::config_error("invalid value for --t: " + v_t);
        }
        qzv::context_ptr c = qzv::context::make(std::move(s));
        return qzv::series_from_tpoly(c, tp);
      }
      qzv::context_spec s;
      s.q_order = v_qord;
      qzv::context_ptr c = qzv::context::make(std::move(s));
      qzv::qpoly p = v_zeta_star ? qzv::zeta_star_q(k, v_qord) : qzv::zeta_q(k, v_qord);
      return qzv::series::from_qpoly(c, p);
    }();
    if (v_format == "json") {
      nlohmann::ordered_json o;
      o["kind"] = v_zeta_t ? "zeta-t" : (v_zeta_star ? "zeta-star" : "zeta");
      o["index"] = v_index;
      o["q_order"] = v_qord;
      nlohmann::ordered_json lines = nlohmann::ordered_json::array();
      std::string text = result.to_text();
      size_t i = 0;
      while (i < text.size()) {
        size_t j = text.find('\n', i);
        if (j == std::string::npos) j = text.size();
        lines.push_back(text.substr(i, j - i));
        i = j + 1;
      }
      o["series"] = std::move(lines);
      std::fputs((o.dump(2) + "\n").c_str(), stdout);
    } else {
      std::fputs(result.to_text().c_str(), stdout);
    }
    return 0;
  } catch (const qzv::error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
