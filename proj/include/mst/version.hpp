#pragma once

#define MST_VERSION "0.1.0"
