// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) { return grtc::app::run_cli(argc, argv, std::cout, std::cerr); }
