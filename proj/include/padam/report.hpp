#pragma once

#include <string>

#include <json.hpp>

#include "padam/config.hpp"
#include "padam/harness.hpp"

namespace padam {

nlohmann::json config_to_json(const RunConfig& cfg);
nlohmann::json aggregate_to_json(const RunConfig& cfg, const AggregateResult& agg);
nlohmann::json comparison_to_json(const RunConfig& cfg, const ComparisonReport& cmp);
nlohmann::json lemma_report_to_json(const LemmaReport& rep);

void write_text_file(const std::string& path, const std::string& content);

// stationarity.csv: optimizer,p,d,T,seed,grad_norm_sq,sum_hist_norms,alpha
std::string stationarity_csv(const RunConfig& cfg, const AggregateResult& agg);
// rate.csv: T,mean,stderr,fitted_slope
std::string rate_csv(const AggregateResult& agg);
// compare.csv: arm,p,alpha,mean,stderr,sparsity_ratio,s_estimate
std::string compare_csv(const ComparisonReport& cmp);

}  // namespace padam
