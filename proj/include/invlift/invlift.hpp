#pragma once

// Umbrella header: separating invariants on product spaces via reduction to
// the stabilizer of a latent base point.

#include "invlift/core.hpp"
#include "invlift/group.hpp"
#include "invlift/io.hpp"
#include "invlift/kernels.hpp"
#include "invlift/oracle.hpp"
#include "invlift/pose.hpp"
#include "invlift/reduce.hpp"
#include "invlift/verify.hpp"
