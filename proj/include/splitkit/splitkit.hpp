#pragma once

#include "splitkit/coding.hpp"
#include "splitkit/core.hpp"
#include "splitkit/dataset.hpp"
#include "splitkit/energy.hpp"
#include "splitkit/generators.hpp"
#include "splitkit/kdtree.hpp"
#include "splitkit/polyfit.hpp"
#include "splitkit/report.hpp"
#include "splitkit/rng.hpp"
#include "splitkit/solver.hpp"
#include "splitkit/split.hpp"
#include "splitkit/standardize.hpp"
#include "splitkit/studies.hpp"
