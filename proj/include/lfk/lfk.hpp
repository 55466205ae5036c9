#pragma once

#include "lfk/error.hpp"
#include "lfk/integer.hpp"
#include "lfk/laurent.hpp"
#include "lfk/bridge.hpp"
#include "lfk/cubes.hpp"
#include "lfk/lspace.hpp"
#include "lfk/floer.hpp"
#include "lfk/classify.hpp"
