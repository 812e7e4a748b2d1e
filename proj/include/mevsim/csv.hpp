#pragma once

#include <map>
#include <ostream>
#include <string>

#include "mevsim/analysis.hpp"
#include "mevsim/dynamics.hpp"
#include "mevsim/orbits.hpp"
#include "mevsim/scenarios.hpp"

namespace mevsim {

// Shortest decimal string that round-trips the exact double.
std::string format_double(double v);

// t,lambda,delta,eta_t
void write_trace_csv(std::ostream& os, const OrbitTrace& trace);

// param,t,lambda,delta
void write_scan_csv(std::ostream& os, const BifurcationScan& scan);

// param,lambda_mean,delta_mean,band_width
void write_scan_summary_csv(std::ostream& os, const BifurcationScan& scan);

// k,fixed_point,least_period,stable
void write_periods_csv(std::ostream& os, const PeriodReport& report);

void write_threshold_csv(std::ostream& os, const ThresholdReport& report);
std::string threshold_report_text(const ThresholdReport& report);

// t,lambda,delta,eta_t,regime
void write_scenario_trace_csv(std::ostream& os, const ScenarioResult& result);

// epoch,eta,w,a_u,b_u,a_m,b_m
void write_epochs_csv(std::ostream& os, const ScenarioResult& result);

std::string chaos_witness_text(const ChaosWitness& wit);

// t then lambda_<rule>,delta_<rule> per rule, aligned rows.
void write_rule_comparison_csv(std::ostream& os,
                               const std::map<UpdateRule, OrbitTrace>& traces);

}  // namespace mevsim
