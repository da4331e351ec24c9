// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

namespace ideal {

// Full command-line surface; returns the process exit code
// (0 ok, 2 validation error, 3 numerical failure).
int cli_main(int argc, char** argv);

}  // namespace ideal
