#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sphcurve/families.hpp"
#include "sphcurve/verify.hpp"

namespace sphcurve::cli {

// Exit codes: 0 success (and verdict pass), 1 verdict fail or compare
// tolerance exceeded, 2 usage or domain error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

nlohmann::json report_json(const std::string& law, const Params& params, double c,
                           const AdmissibleInterval& interval, const DiagnosticsReport& report);

}  // namespace sphcurve::cli
