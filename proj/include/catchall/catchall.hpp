#pragma once

#include "catchall/arma.hpp"
#include "catchall/core.hpp"
#include "catchall/garch.hpp"
#include "catchall/ingest.hpp"
#include "catchall/optim.hpp"
#include "catchall/simulate.hpp"
