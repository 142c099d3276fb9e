#pragma once

#include "srwalk/analysis.hpp"
#include "srwalk/error.hpp"
#include "srwalk/geometry.hpp"
#include "srwalk/model.hpp"
#include "srwalk/model_io.hpp"
#include "srwalk/oracle.hpp"
#include "srwalk/presets.hpp"
#include "srwalk/report_json.hpp"
#include "srwalk/reversal.hpp"
#include "srwalk/reversibility.hpp"
#include "srwalk/stationary.hpp"
