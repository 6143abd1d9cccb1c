#pragma once

namespace qfactor {

// 128-bit intermediate for exact modular products of 64-bit operands.
__extension__ typedef __int128 i128;

}  // namespace qfactor
