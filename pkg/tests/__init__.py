# qetale test suite
