#include "mevsim/csv.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace mevsim {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& os, const OrbitTrace& trace) {
  os << "t,lambda,delta,eta_t\n";
  for (std::size_t t = 0; t < trace.size(); ++t) {
    os << t << ',' << format_double(trace.lambdas[t]) << ','
       << format_double(trace.deltas[t]) << ',' << format_double(trace.etas[t])
       << '\n';
  }
}

void write_scan_csv(std::ostream& os, const BifurcationScan& scan) {
  os << "param,t,lambda,delta\n";
  for (const ScanRecord& row : scan.rows) {
    const std::string p = format_double(row.param);
    for (std::size_t i = 0; i < row.lambdas.size(); ++i) {
      os << p << ',' << scan.burn_in + 1 + i << ','
         << format_double(row.lambdas[i]) << ',' << format_double(row.deltas[i])
         << '\n';
    }
  }
}

void write_scan_summary_csv(std::ostream& os, const BifurcationScan& scan) {
  os << "param,lambda_mean,delta_mean,band_width\n";
  for (const ScanRecord& row : scan.rows) {
    os << format_double(row.param) << ',' << format_double(row.lambda_mean)
       << ',' << format_double(row.delta_mean) << ','
       << format_double(row.band_width()) << '\n';
  }
}

void write_periods_csv(std::ostream& os, const PeriodReport& report) {
  os << "k,fixed_point,least_period,stable\n";
  for (const PeriodicPoint& pt : report.points) {
    os << report.k << ',' << format_double(pt.point) << ',' << pt.least_period
       << ',' << stability_name(pt.stability) << '\n';
  }
}

void write_threshold_csv(std::ostream& os, const ThresholdReport& r) {
  os << "lambda_star,liveness_eta_max,convergence_eta_max,attracting_lo,"
        "attracting_hi,deviation_bound,eta_used,liveness_exceeded\n";
  os << format_double(r.lambda_star) << ',' << format_double(r.liveness_eta_max)
     << ',' << format_double(r.convergence_eta_max) << ','
     << format_double(r.attracting_lo) << ',' << format_double(r.attracting_hi)
     << ',' << (r.deviation_bound ? format_double(*r.deviation_bound) : "")
     << ',' << format_double(r.eta_used) << ','
     << (r.liveness_exceeded() ? 1 : 0) << '\n';
}

std::string threshold_report_text(const ThresholdReport& r) {
  std::ostringstream os;
  os << "lambda_star = " << format_double(r.lambda_star) << '\n'
     << "liveness_eta_max = " << format_double(r.liveness_eta_max) << '\n'
     << "convergence_eta_max = " << format_double(r.convergence_eta_max) << '\n'
     << "attracting_lo = " << format_double(r.attracting_lo) << '\n'
     << "attracting_hi = " << format_double(r.attracting_hi) << '\n';
  if (r.deviation_bound)
    os << "deviation_bound = " << format_double(*r.deviation_bound) << '\n';
  else
    os << "deviation_bound = " << r.deviation_note << '\n';
  os << "eta_used = " << format_double(r.eta_used) << '\n'
     << "liveness_exceeded = " << (r.liveness_exceeded() ? "yes" : "no") << '\n';
  return os.str();
}

void write_scenario_trace_csv(std::ostream& os, const ScenarioResult& result) {
  os << "t,lambda,delta,eta_t,regime\n";
  const OrbitTrace& tr = result.trace;
  for (std::size_t t = 0; t < tr.size(); ++t) {
    const int regime =
        t < result.regime_ids.size() ? result.regime_ids[t] : 0;
    os << t << ',' << format_double(tr.lambdas[t]) << ','
       << format_double(tr.deltas[t]) << ',' << format_double(tr.etas[t]) << ','
       << regime << '\n';
  }
}

void write_epochs_csv(std::ostream& os, const ScenarioResult& result) {
  os << "epoch,eta,w,a_u,b_u,a_m,b_m\n";
  for (const EpochRecord& e : result.epochs) {
    os << e.epoch << ',' << format_double(e.eta) << ',' << format_double(e.w)
       << ',' << format_double(e.a_u) << ',' << format_double(e.b_u) << ','
       << format_double(e.a_m) << ',' << format_double(e.b_m) << '\n';
  }
}

std::string chaos_witness_text(const ChaosWitness& w) {
  std::ostringstream os;
  os << "a = " << format_double(w.a) << '\n'
     << "b = " << format_double(w.b) << '\n'
     << "eta = " << format_double(w.eta) << '\n'
     << "w = " << format_double(w.w) << '\n'
     << "lambda0 = " << format_double(w.lambda0) << '\n'
     << "lambda1 = " << format_double(w.lambda1) << '\n'
     << "lambda2 = " << format_double(w.lambda2) << '\n'
     << "lambda3 = " << format_double(w.lambda3) << '\n'
     << "lambda3 <= lambda0: " << (w.lambda3 <= w.lambda0 ? "yes" : "no") << '\n'
     << "lambda0 <  lambda1: " << (w.lambda0 < w.lambda1 ? "yes" : "no") << '\n'
     << "lambda1 <  lambda2: " << (w.lambda1 < w.lambda2 ? "yes" : "no") << '\n';
  return os.str();
}

void write_rule_comparison_csv(std::ostream& os,
                               const std::map<UpdateRule, OrbitTrace>& traces) {
  if (traces.empty()) throw std::invalid_argument("rule comparison: no traces");
  os << 't';
  for (const auto& [rule, trace] : traces) {
    (void)trace;
    std::string name = rule_name(rule);
    for (char& c : name)
      if (c == '-') c = '_';
    os << ",lambda_" << name << ",delta_" << name;
  }
  os << '\n';
  const std::size_t rows = traces.begin()->second.size();
  for (std::size_t t = 0; t < rows; ++t) {
    os << t;
    for (const auto& [rule, trace] : traces) {
      (void)rule;
      os << ',' << format_double(trace.lambdas[t]) << ','
         << format_double(trace.deltas[t]);
    }
    os << '\n';
  }
}

}  // namespace mevsim
