#pragma once

#include <string>

#include "spearsift/eval/crossval.hpp"
#include "spearsift/eval/metrics.hpp"

namespace spearsift::eval {

// Fixed-precision plain text; identical inputs give identical bytes.
std::string format_report(const EvaluationReport& report);

/// `top` = 0 lists every feature.
std::string format_ranking(const InfoGainRanking& ranking, const std::string& title, std::size_t top = 0);

}  // namespace spearsift::eval
