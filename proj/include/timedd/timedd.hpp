#pragma once

#include "timedd/banded_lu.hpp"
#include "timedd/contraction.hpp"
#include "timedd/discretization.hpp"
#include "timedd/error.hpp"
#include "timedd/experiments.hpp"
#include "timedd/mode_solver.hpp"
#include "timedd/params.hpp"
#include "timedd/penalization.hpp"
#include "timedd/schwarz.hpp"
#include "timedd/table.hpp"
