#pragma once

#include "robustmean/bounds.hpp"
#include "robustmean/contamination.hpp"
#include "robustmean/distributions.hpp"
#include "robustmean/estimators.hpp"
#include "robustmean/experiments.hpp"
#include "robustmean/reports.hpp"
#include "robustmean/rng.hpp"
#include "robustmean/sample.hpp"
