#pragma once

#include "gibbsrec/entropy.hpp"
#include "gibbsrec/error.hpp"
#include "gibbsrec/estimate.hpp"
#include "gibbsrec/moments.hpp"
#include "gibbsrec/qcore.hpp"
#include "gibbsrec/random.hpp"
#include "gibbsrec/reconstruct.hpp"
#include "gibbsrec/sphere.hpp"
