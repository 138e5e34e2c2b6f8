#pragma once

// Everything at once.

#include "udrs/core.hpp"
#include "udrs/drs.hpp"
#include "udrs/entail.hpp"
#include "udrs/error.hpp"
#include "udrs/format.hpp"
#include "udrs/iso.hpp"
#include "udrs/model.hpp"
#include "udrs/order.hpp"
#include "udrs/plural.hpp"
#include "udrs/readings.hpp"
#include "udrs/semantics.hpp"
#include "udrs/textio.hpp"
#include "udrs/types.hpp"
#include "udrs/verify.hpp"
