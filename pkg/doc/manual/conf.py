# -*- coding: utf-8 -*-
#
# GWQA documentation build configuration file.

import sys
import os

sys.path.insert(0, os.path.abspath('../..'))

extensions = [
    'sphinx.ext.autodoc',
]

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

project = u'GWQA'
copyright = u'2026, Fundación Sadosky'

version = '0.1'
release = '0.1.0'

exclude_patterns = ['_build']

pygments_style = 'sphinx'

html_theme = 'default'

html_static_path = ['_static']

htmlhelp_basename = 'GWQAdoc'

man_pages = [
    ('index', 'gwqa', u'GWQA Documentation',
     [u'Fundación Sadosky'], 1)
]
