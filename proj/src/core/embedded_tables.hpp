#pragma once

#include <string>

namespace circlekit {

// Contents of data/table1.csv and data/table2.csv, baked in at build time.
std::string embedded_table1_csv();
std::string embedded_table2_csv();

}  // namespace circlekit
