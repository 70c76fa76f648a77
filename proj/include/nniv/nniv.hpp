#pragma once

#include "nniv/activation.hpp"
#include "nniv/arm.hpp"
#include "nniv/errors.hpp"
#include "nniv/interval.hpp"
#include "nniv/model_io.hpp"
#include "nniv/network.hpp"
#include "nniv/oracle.hpp"
#include "nniv/propagation.hpp"
#include "nniv/spec_io.hpp"
#include "nniv/unsafe_region.hpp"
#include "nniv/verifier.hpp"
