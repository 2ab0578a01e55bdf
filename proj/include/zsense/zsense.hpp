#pragma once

#include "zsense/anomaly_event.hpp"
#include "zsense/cycle_tracker.hpp"
#include "zsense/errors.hpp"
#include "zsense/evaluation.hpp"
#include "zsense/event_log.hpp"
#include "zsense/pipeline.hpp"
#include "zsense/profiling.hpp"
#include "zsense/signal_core.hpp"
#include "zsense/simulator.hpp"
#include "zsense/zscore_model.hpp"
