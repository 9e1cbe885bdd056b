// Everything at once.
#pragma once

#include "lnpencil/eisenstein_param.hpp"
#include "lnpencil/hesse.hpp"
#include "lnpencil/hompoly.hpp"
#include "lnpencil/pencil_data.hpp"
#include "lnpencil/qtau.hpp"
#include "lnpencil/realize.hpp"
#include "lnpencil/serialize.hpp"
