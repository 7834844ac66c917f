#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "qzv/checks.hpp"

using qzv::check_job;
using qzv::check_params;
using qzv::check_report;

TEST_CASE("cheap checks pass end to end") {
  check_params p;
  check_report s = qzv::run_check("stirling", p);
  CHECK(s.status == "pass");
  CHECK(s.seconds >= 0.0);

  check_params h;
  h.q_ord = 12;
  CHECK(qzv::run_check("heine", h).status == "pass");
  CHECK(qzv::run_check("ktw", h).status == "pass");
}

TEST_CASE("unknown check name reports an error") {
  check_report r = qzv::run_check("nope", check_params{});
  CHECK(r.status == "error");
  CHECK(r.detail.find("unknown check") != std::string::npos);
}

TEST_CASE("params string matches the flag spelling") {
  check_params p;
  p.r = 2;
  p.u_deg = 4;
  p.q_ord = 8;
  p.z_ord = 8;
  p.max_weight = 5;
  CHECK(qzv::params_string(p) ==
        "r=2 u-deg=4 q-ord=8 z-ord=8 t=symbolic max-weight=5");
  p.t_symbolic = false;
  p.t_value = qzv::rational(1, 2);
  CHECK(qzv::params_string(p) ==
        "r=2 u-deg=4 q-ord=8 z-ord=8 t=1/2 max-weight=5");
}

TEST_CASE("report rendering") {
  check_report r;
  r.name = "demo";
  r.params = "r=1";
  r.status = "pass";
  CHECK(qzv::report_text(r) == "PASS demo r=1\n");

  r.status = "fail";
  r.detail = "closed form vs direct sum";
  r.witness_monomial = "q^2*u1";
  r.lhs_coeff = "1";
  r.rhs_coeff = "2";
  CHECK(qzv::report_text(r) ==
        "FAIL demo r=1\n"
        "  where: closed form vs direct sum\n"
        "  witness monomial: q^2*u1\n"
        "  lhs: 1\n"
        "  rhs: 2\n");

  r.status = "error";
  r.detail = "bad configuration";
  CHECK(qzv::report_text(r) == "ERROR demo r=1\n  bad configuration\n");
}

TEST_CASE("profiles list known checks only") {
  const std::vector<std::string>& names = qzv::check_names();
  for (const char* profile : {"quick", "full"}) {
    for (const check_job& j : qzv::profile_jobs(profile)) {
      CHECK(std::find(names.begin(), names.end(), j.name) != names.end());
    }
  }
  CHECK(qzv::profile_jobs("quick").size() == names.size());
  CHECK_THROWS_AS(qzv::profile_jobs("nightly"), qzv::config_error);
}

TEST_CASE("parallel runs keep list order") {
  check_params p;
  p.q_ord = 10;
  std::vector<check_job> jobs = {
      {"stirling", p}, {"heine", p}, {"ktw", p}, {"stirling", p}};
  std::vector<check_report> seq = qzv::run_jobs(jobs, 1);
  std::vector<check_report> par = qzv::run_jobs(jobs, 4);
  REQUIRE(seq.size() == par.size());
  for (size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i].name == par[i].name);
    CHECK(seq[i].status == "pass");
    // Everything except the timing is deterministic.
    CHECK(qzv::report_text(seq[i]) == qzv::report_text(par[i]));
  }
}
