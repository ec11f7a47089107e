#pragma once

#include "soclearn/analysis.hpp"
#include "soclearn/belief.hpp"
#include "soclearn/engine.hpp"
#include "soclearn/errors.hpp"
#include "soclearn/experiments.hpp"
#include "soclearn/graph.hpp"
#include "soclearn/io.hpp"
#include "soclearn/parallel.hpp"
#include "soclearn/rng.hpp"
#include "soclearn/version.hpp"
