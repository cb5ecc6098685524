#pragma once

#include "hetform/analysis.hpp"
#include "hetform/control.hpp"
#include "hetform/cubic.hpp"
#include "hetform/errors.hpp"
#include "hetform/geometry.hpp"
#include "hetform/polynomial.hpp"
#include "hetform/sim.hpp"
