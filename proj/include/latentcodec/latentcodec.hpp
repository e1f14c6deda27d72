#pragma once

#include "latentcodec/container.hpp"
#include "latentcodec/embedding.hpp"
#include "latentcodec/error.hpp"
#include "latentcodec/latent.hpp"
#include "latentcodec/lif.hpp"
#include "latentcodec/linear_codec.hpp"
#include "latentcodec/metrics.hpp"
#include "latentcodec/quantizer.hpp"
