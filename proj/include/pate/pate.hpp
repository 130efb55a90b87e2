#pragma once

#include "pate/baselines.hpp"
#include "pate/io.hpp"
#include "pate/metrics.hpp"
#include "pate/report.hpp"
#include "pate/scenarios.hpp"
#include "pate/series.hpp"
#include "pate/version.hpp"
#include "pate/zoning.hpp"
