// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
#include <iostream>
int main() { std::cout << "capctl placeholder\n"; return 0; }
