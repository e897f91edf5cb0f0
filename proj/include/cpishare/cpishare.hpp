#pragma once

// Umbrella header: monthly share-price decomposition onto consumer price
// indices, exhaustive pair/lag model search, stability backtracking, and the
// supporting statistics.

#include "cpishare/catalog.hpp"
#include "cpishare/errors.hpp"
#include "cpishare/month.hpp"
#include "cpishare/regression.hpp"
#include "cpishare/report.hpp"
#include "cpishare/scenario.hpp"
#include "cpishare/search.hpp"
#include "cpishare/series.hpp"
#include "cpishare/stability.hpp"
#include "cpishare/stats.hpp"
#include "cpishare/synthkit.hpp"
#include "cpishare/version.hpp"
