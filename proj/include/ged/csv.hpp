#pragma once

#include <string>

#include "ged/table.hpp"

namespace ged {

// RFC 4180 CSV: header row of column names, then data rows. Fields holding
// comma, quote or newline are double-quoted with inner quotes doubled.
// Lines end in \n; output is UTF-8 without BOM.
std::string to_csv(const DesignTable& table);

}  // namespace ged
