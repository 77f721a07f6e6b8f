from os import path

from setuptools import setup


description = ('Django app that decides whether a family of circles creates envelopes, constructs and verifies '
               'them, decomposes the discriminant set and recovers reflector orthotomics from survey data.')


here = path.abspath(path.dirname(__file__))

# Get the long description from the README file
with open(path.join(here, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

setup(
    name='django-circle-envelopes',
    version='0.1.0',
    description=description,
    long_description=long_description,
    long_description_content_type='text/markdown',
    license='MIT',
    keywords='django envelope circle family frontal discriminant orthotomic',
    packages=[
        'circle_envelopes',
        'circle_envelopes.templatetags',
        'circle_envelopes.management',
        'circle_envelopes.management.commands'],
    include_package_data=True,
    python_requires='>=3.8',
    install_requires=[
        'Django>=3.2',
        'numpy>=1.20',
        'scipy>=1.6',
    ],
    classifiers=[
        'Environment :: Console',
        'Framework :: Django',
        'Intended Audience :: Science/Research',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Topic :: Scientific/Engineering :: Mathematics',
    ]
)
