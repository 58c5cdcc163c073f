#ifndef FISRG_FISRG_HPP
#define FISRG_FISRG_HPP

// Umbrella header for the FISRG segmentation toolkit.

#include "fisrg/config.hpp"
#include "fisrg/errors.hpp"
#include "fisrg/growing.hpp"
#include "fisrg/image.hpp"
#include "fisrg/mask_io.hpp"
#include "fisrg/metrics.hpp"
#include "fisrg/morphology.hpp"
#include "fisrg/nifti.hpp"
#include "fisrg/parallel.hpp"
#include "fisrg/phantom.hpp"
#include "fisrg/preprocess.hpp"
#include "fisrg/report.hpp"
#include "fisrg/rng.hpp"
#include "fisrg/seeds.hpp"
#include "fisrg/tuner.hpp"

#endif // FISRG_FISRG_HPP
