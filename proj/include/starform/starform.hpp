#pragma once

#include "algebra.hpp"
#include "apps.hpp"
#include "field.hpp"
#include "forms.hpp"
#include "io.hpp"
#include "isometry.hpp"
#include "matrix.hpp"
#include "modiso.hpp"
#include "poly.hpp"
#include "staralg.hpp"
#include "symmetrize.hpp"
