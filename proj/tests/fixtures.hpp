// Frozen reference values. Regenerate with `gen_fixtures s3` and paste the
// printed constants here if the enumeration or kernel code changes.
#pragma once

namespace fixtures {

// Cube-power partial sum over the quadrant tree, threshold cut at 1e-9.
// The tail field bounds everything below the cut, so any run with a deeper
// cut must land inside [partial, partial + tail] up to double rounding.
// frozen by gen_fixtures s3 (threshold 1e-9)
constexpr double kS3Partial9 = 0.21349025954230438;
constexpr double kS3Tail9 = 1.0225774239948268e-14;
constexpr unsigned long long kS3Terms9 = 1550569ull;

}  // namespace fixtures
