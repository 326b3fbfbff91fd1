#pragma once

#include "sessia/demos/canvas.hpp"
#include "sessia/demos/counter.hpp"
#include "sessia/demos/hello.hpp"
#include "sessia/demos/lookup.hpp"
#include "sessia/demos/shared_counter.hpp"
#include "sessia/demos/stream.hpp"
#include "sessia/demos/transcript.hpp"
