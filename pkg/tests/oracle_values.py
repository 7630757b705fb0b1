"""Values frozen from tests/oracles/pointcount.py (independent of hyperell)."""

ORACLE = {'running_example': {'coeffs': [1, 3, 3], 'psi': [3, -3]},
 'samples': {'3,1': [[[0, 1, 0, 1], [1, 0, 3]], [[0, 2, 2, 1], [1, -2, 3]], [[1, 1, 0, 1], [1, 0, 3]],
                     [[1, 2, 0, 1], [1, 3, 3]], [[2, 0, 2, 1], [1, -2, 3]], [[2, 1, 2, 1], [1, -2, 3]]],
             '3,2': [[[0, 1, 0, 0, 0, 1], [1, 0, 2, 0, 9]], [[0, 2, 1, 0, 1, 1], [1, -2, 2, -6, 9]],
                     [[1, 0, 2, 0, 2, 1], [1, 2, 4, 6, 9]], [[1, 2, 0, 0, 0, 1], [1, 3, 7, 9, 9]],
                     [[2, 0, 1, 0, 0, 1], [1, -1, 0, -3, 9]], [[2, 1, 2, 0, 1, 1], [1, 0, -2, 0, 9]]],
             '5,1': [[[0, 1, 0, 1], [1, -2, 5]], [[1, 0, 0, 1], [1, 0, 5]], [[1, 3, 4, 1], [1, 3, 5]],
                     [[2, 3, 0, 1], [1, -1, 5]], [[3, 1, 2, 1], [1, -1, 5]], [[4, 0, 1, 1], [1, 4, 5]]],
             '5,2': [[[0, 1, 0, 0, 0, 1], [1, 0, 10, 0, 25]], [[1, 0, 0, 0, 1, 1], [1, 2, 2, 10, 25]],
                     [[1, 3, 4, 4, 1, 1], [1, -1, 9, -5, 25]], [[2, 2, 4, 3, 4, 1], [1, -1, 4, -5, 25]],
                     [[3, 1, 4, 3, 4, 1], [1, 2, 4, 10, 25]], [[4, 0, 4, 4, 2, 1], [1, 1, -4, 5, 25]]],
             '7,1': [[[0, 1, 0, 1], [1, 0, 7]], [[1, 1, 6, 1], [1, 4, 7]], [[2, 3, 0, 1], [1, 1, 7]],
                     [[3, 4, 2, 1], [1, -2, 7]], [[4, 5, 2, 1], [1, 4, 7]], [[5, 6, 0, 1], [1, -1, 7]]]},
 'stats': {'3,1': {'H': 18, 'S1': [0, 60], 'S2': [48, 336], 'nonvanishing': 18, 'simple_zeros': 36},
           '3,2': {'H': 162,
                   'S1': [0, 360, 0, 1896],
                   'S2': [384, 2880, 9456, 58752],
                   'nonvanishing': 162,
                   'simple_zeros': 648},
           '3,3': {'H': 1458,
                   'S1': [0, 3300, 0, 11148, 0, 55860],
                   'S2': [3312, 24048, 118656, 415344, 1454832, 7301088],
                   'nonvanishing': 1458,
                   'simple_zeros': 8724},
           '5,1': {'H': 100, 'S1': [0, 520], 'S2': [480, 5080], 'nonvanishing': 100, 'simple_zeros': 200},
           '5,2': {'H': 2500,
                   'S1': [0, 10400, 0, 73520],
                   'S2': [10560, 150640, 646560, 6757840],
                   'nonvanishing': 2499,
                   'simple_zeros': 9936}}}
