// Umbrella header.
#pragma once

#include "hardy/blaschke.hpp"
#include "hardy/cyclicity.hpp"
#include "hardy/hardy_function.hpp"
#include "hardy/io.hpp"
#include "hardy/lacunary.hpp"
#include "hardy/model_space.hpp"
#include "hardy/policy.hpp"
#include "hardy/random.hpp"
#include "hardy/toeplitz.hpp"
