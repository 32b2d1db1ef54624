#pragma once

#include "hkl/numeric.hpp"
#include "hkl/poly.hpp"
#include "hkl/finite_field.hpp"
#include "hkl/cyclotomic.hpp"
#include "hkl/fft.hpp"
#include "hkl/parallel.hpp"
#include "hkl/kloosterman.hpp"
#include "hkl/matrix.hpp"
#include "hkl/matgroup.hpp"
#include "hkl/classify.hpp"
#include "hkl/io.hpp"
