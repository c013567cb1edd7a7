#pragma once

#include "locattr/errors.hpp"
#include "locattr/evaluation.hpp"
#include "locattr/experiment.hpp"
#include "locattr/graph.hpp"
#include "locattr/io.hpp"
#include "locattr/maxflow.hpp"
#include "locattr/parallel.hpp"
#include "locattr/rng.hpp"
#include "locattr/scan.hpp"
#include "locattr/serialize.hpp"
#include "locattr/simulation.hpp"
#include "locattr/wavelet.hpp"
