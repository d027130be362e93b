#pragma once

#include "reckern/estimator.hpp"
#include "reckern/montecarlo.hpp"

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

namespace reckern {

//! replicate,x (or x_1..x_d),f_hat,phi_hat,r_hat,T_oracle,T_plugin
//! Undefined values are written as NA.
void write_replicates_csv(const McReport& report, std::ostream& out);

//! Theory constants, empirical moments, KS results and check outcomes.
nlohmann::json summary_json(const McReport& report, const std::vector<CheckResult>& checks);

//! x_1..x_d,f_hat,r_hat,phi_hat,n for every grid point.
void write_snapshot_csv(const RecursiveEstimator& estimator, std::ostream& out);

struct DataRow
{
  Point x;
  std::vector<double> y;
};

//! Reads a data file with header x_1,...,x_d followed by y or y_1,...,y_k.
//! Throws IoError naming the offending column or line.
std::vector<DataRow> read_observations_csv(std::istream& in, std::size_t dim);

} // namespace reckern
