#pragma once

#include "galimage/numth/arith.hpp"
#include "galimage/numth/character.hpp"
#include "galimage/numth/factor.hpp"
#include "galimage/numth/field.hpp"
#include "galimage/numth/galois.hpp"
#include "galimage/numth/modular.hpp"
#include "galimage/numth/poly.hpp"
