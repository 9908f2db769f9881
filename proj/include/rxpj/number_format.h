//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXPJ_NUMBER_FORMAT_H_
#define RXPJ_NUMBER_FORMAT_H_

#include <string>

namespace rxpj {

// Shortest decimal text that reads back to exactly `v`.
std::string format_number(double v);

} // namespace rxpj

#endif // RXPJ_NUMBER_FORMAT_H_
