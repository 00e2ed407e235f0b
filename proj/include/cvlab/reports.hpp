#pragma once

// Text renderings of results: versioned JSON and CSV. Numbers use the shortest round-trip
// decimal form, so identical results always produce identical bytes.

#include <string>
#include <vector>

#include "cvlab/analysis.hpp"
#include "cvlab/estimators.hpp"
#include "cvlab/simlab.hpp"

namespace cvlab {

inline constexpr int kReportSchema = 1;

std::string report_json(const EstimatorReport& r);
/// Header line plus one row.
std::string report_csv(const EstimatorReport& r);

std::string decomposition_json(const DecompositionReport& d);
std::string decomposition_csv(const DecompositionReport& d);

/// role,mean,sigma,rms_cond,rms_mean,rho,n with n = n1 + n2.
std::string experiment_table_csv(const ExperimentRow& row);
/// trial,S,Sbar,Shat
std::string triples_csv(const std::vector<TrialTriple>& triples);
/// n1,ratio_empirical,ratio_theory,model
std::string ratio_csv(const std::vector<RatioPoint>& points);

}  // namespace cvlab
