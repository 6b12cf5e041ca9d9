#pragma once

#define IMBREG_VERSION "0.1.0"

#include "imbreg/benchmark.hpp"
#include "imbreg/binning.hpp"
#include "imbreg/csv.hpp"
#include "imbreg/dataset.hpp"
#include "imbreg/density.hpp"
#include "imbreg/distance.hpp"
#include "imbreg/encoding.hpp"
#include "imbreg/ensemble.hpp"
#include "imbreg/error.hpp"
#include "imbreg/knn_regressor.hpp"
#include "imbreg/losses.hpp"
#include "imbreg/metrics.hpp"
#include "imbreg/mlp.hpp"
#include "imbreg/relevance.hpp"
#include "imbreg/resampling.hpp"
#include "imbreg/rng.hpp"
#include "imbreg/scaling.hpp"
#include "imbreg/split.hpp"
#include "imbreg/stats.hpp"
#include "imbreg/synthetic.hpp"
