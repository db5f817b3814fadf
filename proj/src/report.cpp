#include "evdkit/report.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

namespace evdkit {

double model_flops_dbr(int n) { return 4.0 / 3.0 * n * double(n) * n; }
double model_flops_chase(int n, int b) { return 6.0 * n * double(n) * b; }
double model_flops_direct(int n) { return 4.0 / 3.0 * n * double(n) * n; }
double model_flops_syr2k(int n, int k) { return 2.0 * n * double(n) * k; }

std::string csv_header() {
  return "schema_version,stage,n,b,nb,workers,seconds,gflops,residual,seed";
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string csv_row(const RunReport& r) {
  std::string out;
  out += std::to_string(r.schema_version);
  out += ',';
  out += r.stage;
  out += ',';
  out += std::to_string(r.n);
  out += ',';
  out += std::to_string(r.b);
  out += ',';
  out += std::to_string(r.nb);
  out += ',';
  out += std::to_string(r.workers);
  out += ',';
  out += fmt_double(r.seconds);
  out += ',';
  out += fmt_double(r.gflops);
  out += ',';
  out += fmt_double(r.residual);
  out += ',';
  out += std::to_string(r.seed);
  return out;
}

std::string to_json_array(const std::vector<RunReport>& rs) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const RunReport& r : rs) {
    nlohmann::ordered_json o;
    o["schema_version"] = r.schema_version;
    o["stage"] = r.stage;
    o["n"] = r.n;
    o["b"] = r.b;
    o["nb"] = r.nb;
    o["workers"] = r.workers;
    o["seconds"] = r.seconds;
    o["gflops"] = r.gflops;      // NaN serializes as null
    o["residual"] = r.residual;  // NaN serializes as null
    o["seed"] = r.seed;
    arr.push_back(std::move(o));
  }
  return arr.dump(2);
}

}  // namespace evdkit
