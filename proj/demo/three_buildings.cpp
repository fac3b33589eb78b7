// SPDX-License-Identifier: Apache-2.0
//
// Shares one sunny slot among three buildings under each policy and prints
// the split together with the value of the self-consumed energy.

#include <iostream>

#include "csc/csc.hpp"

int main() {
  using namespace csc;

  const Community community = demo_community();
  const TariffBook book = TariffBook::from(community);
  const Timestamp noon = Timestamp::parse("2022-05-09T13:30:00+02:00");

  const EnergyWh production(10'000);
  const EnergyMap demand{{"ESTIA1", EnergyWh(4000)}, {"ESTIA2", EnergyWh(3000)}, {"ESTIA4", EnergyWh(2000)}};
  const auto kors = KorVector::make({{"ESTIA1", 0.4245}, {"ESTIA2", 0.5039}, {"ESTIA4", 0.0716}});
  const auto order = derive_priority_order(community.participants, book);

  const std::vector<std::pair<std::string, SlotAllocation>> runs = {
      {"static", allocate_static(noon, production, demand, kors)},
      {"default-dynamic", allocate_default_dynamic(noon, production, demand)},
      {"custom-dynamic", allocate_custom_dynamic(noon, production, demand, order)},
  };

  const TimeWindow window{noon, noon.plus_seconds(kSlotSeconds)};
  for (const auto& [name, a] : runs) {
    const std::vector<SlotAllocation> one{a};
    const auto savings = compute_savings(one, book, window);
    std::cout << name << ":";
    for (const auto& [id, e] : a.self_consumed()) std::cout << " " << id << "=" << e.value() << "Wh";
    std::cout << " surplus=" << a.surplus_to_grid().value() << "Wh savings=" << savings.total.to_cents_string()
              << " EUR\n";
  }
}
