#pragma once

#include "fourthorder/classify.hpp"
#include "fourthorder/errors.hpp"
#include "fourthorder/interference.hpp"
#include "fourthorder/multilayer.hpp"
#include "fourthorder/numerics.hpp"
#include "fourthorder/spectra.hpp"
