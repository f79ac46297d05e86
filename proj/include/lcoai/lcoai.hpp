#pragma once

#include "lcoai/config.hpp"
#include "lcoai/cost.hpp"
#include "lcoai/decision.hpp"
#include "lcoai/errors.hpp"
#include "lcoai/ingest.hpp"
#include "lcoai/money.hpp"
#include "lcoai/report.hpp"
#include "lcoai/scenario.hpp"
#include "lcoai/sensitivity.hpp"
