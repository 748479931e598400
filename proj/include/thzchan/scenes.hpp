// SPDX-License-Identifier: Apache-2.0
//
// thzchan: terahertz indoor channel modelling toolkit
// Copyright (C) 2026 thzchan contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#ifndef THZCHAN_SCENES_HPP
#define THZCHAN_SCENES_HPP

#include "thzchan/geometry_rt.hpp"

#include <string>
#include <vector>

namespace thz
{
    struct NamedScene
    {
        std::string label;
        RoomScene scene;
    };

    /// The 21 Tx/Rx placements used for ensemble validation. Two transmitters sit near the room corner and
    /// the middle of the south wall; receivers fan out at the measured link distances.
    std::vector<NamedScene> validation_scenes();

    /// Link distances of the validation set, in order.
    std::vector<double> validation_distances();

} // namespace thz

#endif
