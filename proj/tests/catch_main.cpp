// Catch2 v3 amalgamated translation unit supplies main(); nothing to add here.
#include <catch2/catch_amalgamated.hpp>
