#pragma once

#include "ncgeom/errors.hpp"
#include "ncgeom/linalg.hpp"
#include "ncgeom/core.hpp"
#include "ncgeom/polynomial.hpp"
#include "ncgeom/ncmap.hpp"
#include "ncgeom/json_io.hpp"
#include "ncgeom/domains.hpp"
#include "ncgeom/metrics.hpp"
#include "ncgeom/dynamics.hpp"
#include "ncgeom/horospheres.hpp"
#include "ncgeom/config.hpp"
#include "ncgeom/experiments.hpp"
