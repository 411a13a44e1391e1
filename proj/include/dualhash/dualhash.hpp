#pragma once

#include "dualhash/bitmatrix.hpp"
#include "dualhash/bitvector.hpp"
#include "dualhash/convolution.hpp"
#include "dualhash/facm.hpp"
#include "dualhash/families.hpp"
#include "dualhash/field.hpp"
#include "dualhash/keyfile.hpp"
#include "dualhash/numtheory.hpp"
#include "dualhash/security.hpp"
#include "dualhash/toeplitz.hpp"
#include "dualhash/verify.hpp"
