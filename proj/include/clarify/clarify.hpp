/*
 * Copyright 2026 The Clarify Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "clarify/adaptation.hpp"
#include "clarify/casebase.hpp"
#include "clarify/engine.hpp"
#include "clarify/error.hpp"
#include "clarify/explanation.hpp"
#include "clarify/ontology.hpp"
#include "clarify/retrieval.hpp"
#include "clarify/similarity.hpp"
