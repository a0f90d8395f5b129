#pragma once

#define QUICCI_VERSION "0.1.0"
