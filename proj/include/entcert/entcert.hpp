#pragma once

#include "entcert/compatibility.hpp"
#include "entcert/depth_maps.hpp"
#include "entcert/errors.hpp"
#include "entcert/io.hpp"
#include "entcert/map_spec.hpp"
#include "entcert/operator_core.hpp"
#include "entcert/optim.hpp"
#include "entcert/shape.hpp"
#include "entcert/symmetric.hpp"
