#pragma once

#include "bbpa/types.hpp"
#include "bbpa/system.hpp"
#include "bbpa/norm.hpp"
#include "bbpa/semantics.hpp"
#include "bbpa/game.hpp"
#include "bbpa/transducer.hpp"
#include "bbpa/consistency.hpp"
#include "bbpa/canonical.hpp"
