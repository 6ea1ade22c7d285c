#pragma once

#include "bibscore/bcs.hpp"
#include "bibscore/config.hpp"
#include "bibscore/csv.hpp"
#include "bibscore/errors.hpp"
#include "bibscore/evaluation.hpp"
#include "bibscore/indicators.hpp"
#include "bibscore/io.hpp"
#include "bibscore/model_io.hpp"
#include "bibscore/pca.hpp"
#include "bibscore/pipeline.hpp"
#include "bibscore/records.hpp"
#include "bibscore/rng.hpp"
#include "bibscore/simca.hpp"
#include "bibscore/stats.hpp"
#include "bibscore/synth.hpp"
#include "bibscore/version.hpp"
