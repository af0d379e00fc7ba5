#pragma once

#include "bgc/contract.hpp"
#include "bgc/deviation.hpp"
#include "bgc/equilibria.hpp"
#include "bgc/error.hpp"
#include "bgc/formula.hpp"
#include "bgc/game.hpp"
#include "bgc/game_io.hpp"
#include "bgc/linear.hpp"
#include "bgc/rational.hpp"
#include "bgc/reductions.hpp"
#include "bgc/report.hpp"
#include "bgc/synthesis.hpp"
