#pragma once

#include "qwt/core/algebra.hpp"
#include "qwt/core/enumerate.hpp"
#include "qwt/core/error.hpp"
#include "qwt/core/json_io.hpp"
#include "qwt/core/print.hpp"
#include "qwt/core/read.hpp"
#include "qwt/core/signature.hpp"
#include "qwt/core/term.hpp"
#include "qwt/encodings/instances.hpp"
#include "qwt/engine/qw_state.hpp"
#include "qwt/engine/replay.hpp"
#include "qwt/engine/separator.hpp"
#include "qwt/engine/snapshot.hpp"
#include "qwt/equations/lift.hpp"
#include "qwt/equations/system.hpp"
#include "qwt/initiality/elim.hpp"
#include "qwt/initiality/rec.hpp"
#include "qwt/schema/analysis.hpp"
#include "qwt/schema/elaborate.hpp"
#include "qwt/schema/parser.hpp"
#include "qwt/schema/pretty.hpp"
#include "qwt/schema/translate.hpp"
