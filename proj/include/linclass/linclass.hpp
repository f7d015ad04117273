#pragma once

#include "linclass/archive.hpp"
#include "linclass/canon.hpp"
#include "linclass/classify.hpp"
#include "linclass/code.hpp"
#include "linclass/errors.hpp"
#include "linclass/extender.hpp"
#include "linclass/galois.hpp"
#include "linclass/geometry.hpp"
#include "linclass/macwilliams.hpp"
