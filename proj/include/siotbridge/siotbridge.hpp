#pragma once

#include "common.hpp"
#include "geo.hpp"
#include "trace_ingest.hpp"
#include "interest_model.hpp"
#include "human_graph.hpp"
#include "siot_graph.hpp"
#include "cior_protocol.hpp"
#include "scenario.hpp"
#include "experiment.hpp"
#include "metrics_report.hpp"
