#pragma once

#include "core.hpp"
#include "params.hpp"
#include "spacers.hpp"
#include "verdict.hpp"
#include "decide.hpp"
#include "polyiso.hpp"
#include "simulate.hpp"
#include "io.hpp"
