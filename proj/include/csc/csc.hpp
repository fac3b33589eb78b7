// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "csc/allocation/apportion.hpp"
#include "csc/allocation/policies.hpp"
#include "csc/allocation/series.hpp"
#include "csc/audit/digest.hpp"
#include "csc/audit/ledger.hpp"
#include "csc/billing/metrics.hpp"
#include "csc/billing/report_io.hpp"
#include "csc/core/decimal.hpp"
#include "csc/core/energy.hpp"
#include "csc/core/error.hpp"
#include "csc/core/model.hpp"
#include "csc/core/time.hpp"
#include "csc/core/validate.hpp"
#include "csc/ingestion/csv.hpp"
#include "csc/ingestion/keyvalue.hpp"
#include "csc/ingestion/kors.hpp"
#include "csc/ingestion/normalize.hpp"
#include "csc/ingestion/scenario.hpp"
#include "csc/runner/config.hpp"
#include "csc/runner/run.hpp"
#include "csc/runner/synth.hpp"
