#pragma once

#include "sessia/choice.hpp"
#include "sessia/constructs.hpp"
#include "sessia/context.hpp"
#include "sessia/instrument.hpp"
#include "sessia/nat.hpp"
#include "sessia/protocol.hpp"
#include "sessia/recursion.hpp"
#include "sessia/runtime.hpp"
#include "sessia/session.hpp"
#include "sessia/shared.hpp"
