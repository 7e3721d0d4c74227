#pragma once

#include "galimage/modsym/cusps.hpp"
#include "galimage/modsym/eigen.hpp"
#include "galimage/modsym/genus.hpp"
#include "galimage/modsym/heilbronn.hpp"
#include "galimage/modsym/p1.hpp"
#include "galimage/modsym/space.hpp"
