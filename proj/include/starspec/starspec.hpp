#pragma once

#include "starspec/bessel.hpp"
#include "starspec/closed_form.hpp"
#include "starspec/errors.hpp"
#include "starspec/extensions.hpp"
#include "starspec/graph.hpp"
#include "starspec/linalg.hpp"
#include "starspec/roots.hpp"
#include "starspec/spectrum.hpp"
#include "starspec/transfer.hpp"
#include "starspec/validation.hpp"
#include "starspec/vertex_unitary.hpp"
